#include "unroll/value.hpp"

namespace unroll {

std::string Value::to_string() const {
    if (is_int()) return std::to_string(as_int());
    if (is_bool()) return as_bool() ? "true" : "false";
    std::string s = "[";
    const auto& m = as_matrix();
    for (std::size_t i = 0; i < m.items.size(); ++i) {
        if (i) s += ", ";
        s += m.items[i].to_string();
    }
    return s + "]";
}

bool operator==(const Value& a, const Value& b) {
    if (a.v_.index() != b.v_.index()) return false;
    if (a.is_int()) return a.as_int() == b.as_int();
    if (a.is_bool()) return a.as_bool() == b.as_bool();
    const auto& ma = a.as_matrix();
    const auto& mb = b.as_matrix();
    return ma.ranges == mb.ranges && ma.items == mb.items;
}

Expr to_expr(const Value& v) {
    if (v.is_int()) return int_lit(v.as_int());
    if (v.is_bool()) return bool_lit(v.as_bool());
    const auto& m = v.as_matrix();
    if (m.ranges.size() != 1 || m.ranges[0].lo != 1)
        throw Error(ErrorKind::Internal, "only 1-D matrices indexed from 1 have a literal form");
    std::vector<Expr> items;
    items.reserve(m.items.size());
    for (const auto& item : m.items) items.push_back(to_expr(item));
    return matrix_lit(std::move(items));
}

Env::Env(std::initializer_list<std::pair<std::string, Value>> init) {
    for (const auto& [name, value] : init) bind(name, value);
}

std::size_t Env::bind(std::string_view name, Value v) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].name == name) {
            set(i, std::move(v));
            return i;
        }
    }
    entries_.push_back({std::string(name), std::move(v), true});
    return entries_.size() - 1;
}

std::size_t Env::declare(std::string_view name) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].name == name) {
            entries_[i].bound = false;
            return i;
        }
    }
    entries_.push_back({std::string(name), Value{}, false});
    return entries_.size() - 1;
}

}  // namespace unroll

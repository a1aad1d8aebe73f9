#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "unroll/ast.hpp"

namespace unroll {

class Value;

struct MatrixValue {
    std::vector<IntRange> ranges;
    std::vector<Value> items;  // row-major
};

/// Ground value of an expression.
class Value {
public:
    Value() : v_(std::int64_t{0}) {}
    Value(std::int64_t i) : v_(i) {}
    Value(int i) : v_(std::int64_t{i}) {}
    Value(bool b) : v_(b) {}
    Value(std::shared_ptr<const MatrixValue> m) : v_(std::move(m)) {}

    bool is_int() const { return std::holds_alternative<std::int64_t>(v_); }
    bool is_bool() const { return std::holds_alternative<bool>(v_); }
    bool is_matrix() const { return v_.index() == 2; }

    std::int64_t as_int() const { return std::get<std::int64_t>(v_); }
    bool as_bool() const { return std::get<bool>(v_); }
    const MatrixValue& as_matrix() const { return *std::get<2>(v_); }

    /// Ints and bools as a single integer (bools 0/1); used by the solver.
    std::int64_t as_scalar() const { return is_bool() ? (as_bool() ? 1 : 0) : as_int(); }

    std::string to_string() const;

    friend bool operator==(const Value& a, const Value& b);

private:
    std::variant<std::int64_t, bool, std::shared_ptr<const MatrixValue>> v_;
};

/// Literal expression for a scalar value, or a matrix literal for a 1-D matrix.
Expr to_expr(const Value& v);

/// Name -> value bindings. Small and flat; lookups are linear, which beats
/// hashing for the handful of induction variables a comprehension binds.
/// Slots may be left unbound so a single Env can be reused across a search.
class Env {
public:
    Env() = default;
    Env(std::initializer_list<std::pair<std::string, Value>> init);

    /// Binds (or rebinds) `name`, returning its slot.
    std::size_t bind(std::string_view name, Value v);
    /// Declares `name` without a value.
    std::size_t declare(std::string_view name);

    void set(std::size_t slot, Value v) {
        entries_[slot].value = std::move(v);
        entries_[slot].bound = true;
    }
    void unset(std::size_t slot) { entries_[slot].bound = false; }

    const Value* find(std::string_view name) const {
        for (const auto& e : entries_)
            if (e.bound && e.name == name) return &e.value;
        return nullptr;
    }
    std::size_t size() const { return entries_.size(); }

private:
    struct Entry {
        std::string name;
        Value value;
        bool bound = false;
    };
    std::vector<Entry> entries_;
};

/// Parameter bindings from a `.param` file or `--let`.
using Bindings = std::map<std::string, Value, std::less<>>;

}  // namespace unroll

#pragma once

#include <cstdint>
#include <compare>
#include <set>
#include <string>
#include <stdexcept>
#include <variant>

namespace minidyn {

/// Abstract value domain: literal constants plus the three special values.
/// Bullet is only ever used as an index name, never as a member of a
/// variable's value set.
class Value {
public:
    enum class Kind { Int, Str, Star, Undef, Bullet };

    Value() : kind_(Kind::Undef) {}
    static Value ofInt(int64_t v) { Value x; x.kind_ = Kind::Int; x.int_ = v; return x; }
    static Value ofStr(std::string v) { Value x; x.kind_ = Kind::Str; x.str_ = std::move(v); return x; }
    static Value star() { Value x; x.kind_ = Kind::Star; return x; }
    static Value undef() { Value x; x.kind_ = Kind::Undef; return x; }
    static Value bullet() { Value x; x.kind_ = Kind::Bullet; return x; }

    Kind kind() const { return kind_; }
    bool isInt() const { return kind_ == Kind::Int; }
    bool isStr() const { return kind_ == Kind::Str; }
    bool isLit() const { return kind_ == Kind::Int || kind_ == Kind::Str; }
    bool isStar() const { return kind_ == Kind::Star; }
    bool isUndef() const { return kind_ == Kind::Undef; }
    bool isBullet() const { return kind_ == Kind::Bullet; }

    int64_t asInt() const { return int_; }
    const std::string& asStr() const { return str_; }

    // Ordering doubles as the canonical display order: ints ascending,
    // then strings, then *, then undefined, then the unknown-field name.
    friend bool operator==(const Value& a, const Value& b) {
        if (a.kind_ != b.kind_) return false;
        switch (a.kind_) {
            case Kind::Int: return a.int_ == b.int_;
            case Kind::Str: return a.str_ == b.str_;
            default: return true;
        }
    }
    friend bool operator<(const Value& a, const Value& b) {
        if (a.kind_ != b.kind_) return static_cast<int>(a.kind_) < static_cast<int>(b.kind_);
        switch (a.kind_) {
            case Kind::Int: return a.int_ < b.int_;
            case Kind::Str: return a.str_ < b.str_;
            default: return false;
        }
    }

    std::string toString() const {
        switch (kind_) {
            case Kind::Int: return std::to_string(int_);
            case Kind::Str: return str_;
            case Kind::Star: return "*";
            case Kind::Undef: return "undef";
            case Kind::Bullet: return "\xe2\x80\xa2"; // •
        }
        return "?";
    }

private:
    Kind kind_;
    int64_t int_ = 0;
    std::string str_;
};

using ValueSet = std::set<Value>;

inline bool contains(const ValueSet& s, const Value& v) { return s.count(v) != 0; }

/// Contract-violation errors raised by the analysis core.
class AnalysisError : public std::runtime_error {
public:
    enum class Code { InternalError, DuplicateIndex, DepthLimitExceeded,
                      IterationLimitExceeded };
    AnalysisError(Code code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    Code code() const { return code_; }
private:
    Code code_;
};

} // namespace minidyn

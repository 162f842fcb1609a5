#pragma once

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace purepairs {

using Vertex = int;

/// Sorted, duplicate-free list of vertex indices.
using VertexSet = std::vector<Vertex>;

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Raised when an operation's documented precondition does not hold.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a construction's hypothesis fails on a concrete instance. The message
/// names the violated condition.
class HypothesisViolation : public std::runtime_error {
public:
    explicit HypothesisViolation(std::string condition, std::string detail = {})
        : std::runtime_error(condition + (detail.empty() ? "" : ": " + detail)),
          condition_(std::move(condition))
    {
    }

    const std::string & condition() const noexcept { return condition_; }

private:
    std::string condition_;
};

/// A bounded search ran out of budget before it could decide.
class InconclusiveSearch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A construction step could not proceed. `stage` tags where.
class StageFailure : public std::runtime_error {
public:
    StageFailure(std::string stage, const std::string & detail)
        : std::runtime_error(stage + ": " + detail), stage_(std::move(stage))
    {
    }

    const std::string & stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

/// A postcondition re-check failed. Always a bug.
class CertificationFailure : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Strict enforces every numeric hypothesis verbatim; relaxed checks only the
/// structural preconditions an operation actually consumes.
enum class Mode { strict, relaxed };

/// Outcome of a budgeted exact search.
enum class Verdict { found, absent, inconclusive };

inline const char * to_string(Verdict v)
{
    switch (v) {
        case Verdict::found: return "found";
        case Verdict::absent: return "absent";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

inline void canonicalize(VertexSet & s)
{
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
}

inline VertexSet set_union(const VertexSet & a, const VertexSet & b)
{
    VertexSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline VertexSet set_difference(const VertexSet & a, const VertexSet & b)
{
    VertexSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline VertexSet set_intersection(const VertexSet & a, const VertexSet & b)
{
    VertexSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline bool contains_vertex(const VertexSet & s, Vertex v)
{
    return std::binary_search(s.begin(), s.end(), v);
}

inline bool disjoint(const VertexSet & a, const VertexSet & b)
{
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i == *j)
            return false;
        if (*i < *j)
            ++i;
        else
            ++j;
    }
    return true;
}

inline Rational ratio(std::int64_t num, std::int64_t den)
{
    return Rational(num, den);
}

inline BigInt ceil_rational(const Rational & q)
{
    BigInt n = boost::multiprecision::numerator(q);
    BigInt d = boost::multiprecision::denominator(q);
    BigInt r = n / d;
    if (r * d < n)
        ++r;
    return r;
}

inline BigInt floor_rational(const Rational & q)
{
    BigInt n = boost::multiprecision::numerator(q);
    BigInt d = boost::multiprecision::denominator(q);
    BigInt r = n / d;
    if (r * d > n)
        --r;
    return r;
}

inline std::string to_string(const Rational & q)
{
    return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}

/// Parses "p/q", "p" or a decimal like "0.25" into an exact rational.
inline Rational parse_rational(const std::string & text)
{
    if (text.empty())
        throw PreconditionError("empty rational");
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        BigInt p(text.substr(0, slash));
        BigInt q(text.substr(slash + 1));
        if (q == 0)
            throw PreconditionError("zero denominator in '" + text + "'");
        return Rational(p, q);
    }
    auto dot = text.find('.');
    if (dot == std::string::npos)
        return Rational(BigInt(text));
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    BigInt den = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(text.size() - dot - 1));
    return Rational(BigInt(digits.empty() || digits == "-" ? "0" : digits), den);
}

/// Exact comparison of x against base^e for x >= 0, base >= 1 and rational e.
/// Returns -1, 0 or 1 for x <, =, > base^e.
inline int compare_with_power(const Rational & x, std::int64_t base, const Rational & e)
{
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    if (x < 0)
        return -1;
    if (base == 1 || numerator(e) == 0)
        return x < 1 ? -1 : (x > 1 ? 1 : 0);
    if (x == 0)
        return -1;
    // x^q versus base^p with e = p/q, q > 0.
    BigInt p = numerator(e);
    BigInt q = denominator(e);
    if (q > 4096 || boost::multiprecision::abs(p) > 1 << 20)
        throw PreconditionError("exponent too large for exact power comparison");
    unsigned qq = static_cast<unsigned>(q);
    BigInt xn = boost::multiprecision::pow(numerator(x), qq);
    BigInt xd = boost::multiprecision::pow(denominator(x), qq);
    BigInt b = boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(boost::multiprecision::abs(p)));
    // compare xn/xd with b (p > 0) or 1/b (p < 0)
    BigInt lhs = p > 0 ? xn : xn * b;
    BigInt rhs = p > 0 ? xd * b : xd;
    return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

}  // namespace purepairs

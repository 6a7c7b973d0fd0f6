#ifndef TORIX_RATIONAL_HPP
#define TORIX_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

#include "torix/errors.hpp"

namespace torix {

using Int = boost::multiprecision::cpp_int;

// Exact rational scalar. cpp_rational keeps the canonical form we rely on
// everywhere: reduced fraction, denominator > 0.
using Scalar = boost::multiprecision::cpp_rational;

// Quotient of two integers with any sign pattern; q must be nonzero.
inline Scalar make_scalar(const Int& p, const Int& q) {
    if (q == 0) {
        throw validation_error("BadScalar", "zero denominator");
    }
    return Scalar(p) / Scalar(q);
}

// Serialized form is "p/q", or just "p" when q = 1.
inline std::string format_scalar(const Scalar& x) {
    std::string s = numerator(x).str();
    if (denominator(x) != 1) {
        s += "/" + denominator(x).str();
    }
    return s;
}

inline Scalar parse_scalar(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            return Scalar(Int(text));
        }
        const Int num(text.substr(0, slash));
        const Int den(text.substr(slash + 1));
        if (den == 0) {
            throw validation_error("BadScalar", "zero denominator in '" + text + "'");
        }
        return make_scalar(num, den);
    } catch (const validation_error&) {
        throw;
    } catch (const std::exception&) {
        throw validation_error("BadScalar", "cannot parse scalar '" + text + "'");
    }
}

} // namespace torix

#endif

#pragma once

#include <complex>
#include <cstdio>
#include <ostream>
#include <string>

namespace exjacobi {

/// 17 significant digits round-trips doubles exactly.
inline std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string csv_num(int v) { return std::to_string(v); }

/// Complex values are rendered as a single comma-free token, e.g. 1.5+0.25i.
inline std::string csv_num(std::complex<double> z) {
    if (z.imag() == 0.0) return csv_num(z.real());
    std::string s = csv_num(z.real());
    s += (z.imag() >= 0.0 ? "+" : "-");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", std::abs(z.imag()));
    s += buf;
    s += "i";
    return s;
}

namespace detail {
inline void csv_row_impl(std::ostream& os, bool) { os << '\n'; }
template <class T, class... Rest>
void csv_row_impl(std::ostream& os, bool first, const T& v, const Rest&... rest) {
    if (!first) os << ',';
    if constexpr (std::is_convertible_v<T, std::string>)
        os << std::string(v);
    else
        os << csv_num(v);
    csv_row_impl(os, false, rest...);
}
}  // namespace detail

template <class... Ts>
void csv_row(std::ostream& os, const Ts&... vs) {
    detail::csv_row_impl(os, true, vs...);
}

}  // namespace exjacobi

#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "numcert/system.hpp"

namespace numcert {

// Input files for the external alphaCertified tool (v1.3 layout; see
// docs/alphacertified-format.md). The header carries the variable and
// polynomial counts, each polynomial block starts with its term count, and
// every term is one line: the exponent tuple then the real and imaginary
// coefficient parts. Rational coefficients are written p/q.

namespace detail {

template <class S>
std::string coefficient_part_to_text(const typename ScalarTraits<S>::Real& v) {
  if constexpr (ScalarTraits<S>::exact)
    return rational_to_string(v);
  else
    return double_to_string(v);
}

template <class S>
typename ScalarTraits<S>::Real coefficient_part_from_text(const std::string& text) {
  if constexpr (ScalarTraits<S>::exact) {
    return rational_from_string(text);
  } else {
    double v = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
      // alphaCertified allows rationals in floating-point files too
      return rational_from_string(text).convert_to<double>();
    }
    return v;
  }
}

}  // namespace detail

template <class S>
void write_alphacertified_system(std::ostream& out, const PolySystem<S>& F) {
  using Traits = ScalarTraits<S>;
  out << F.num_vars() << " " << F.size() << "\n";
  for (const auto& p : F.polys()) {
    out << "\n" << p.term_count() << "\n";
    for (const auto& [m, c] : p.terms()) {
      for (std::size_t j = 0; j < F.num_vars(); ++j) out << m.exponents[j] << " ";
      out << detail::coefficient_part_to_text<S>(Traits::re(c)) << " "
          << detail::coefficient_part_to_text<S>(Traits::im(c)) << "\n";
    }
  }
}

template <class S>
void write_alphacertified_points(std::ostream& out, const std::vector<Point<S>>& points) {
  using Traits = ScalarTraits<S>;
  out << points.size() << "\n";
  for (const auto& p : points) {
    out << "\n";
    for (const auto& c : p.coords)
      out << detail::coefficient_part_to_text<S>(Traits::re(c)) << " "
          << detail::coefficient_part_to_text<S>(Traits::im(c)) << "\n";
  }
}

namespace detail {

inline std::string next_token(std::istream& in, const char* what) {
  std::string tok;
  if (!(in >> tok)) throw ParseError(std::string("unexpected end of file, expected ") + what, 0);
  return tok;
}

}  // namespace detail

template <class S>
PolySystem<S> read_alphacertified_system(std::istream& in) {
  using Traits = ScalarTraits<S>;
  std::size_t n_vars = std::stoul(detail::next_token(in, "variable count"));
  std::size_t n_polys = std::stoul(detail::next_token(in, "polynomial count"));
  std::vector<Polynomial<S>> polys;
  polys.reserve(n_polys);
  for (std::size_t i = 0; i < n_polys; ++i) {
    std::size_t n_terms = std::stoul(detail::next_token(in, "term count"));
    Polynomial<S> p(n_vars);
    for (std::size_t t = 0; t < n_terms; ++t) {
      Monomial m(n_vars);
      for (std::size_t j = 0; j < n_vars; ++j)
        m.exponents[j] =
            static_cast<std::uint32_t>(std::stoul(detail::next_token(in, "exponent")));
      auto re = detail::coefficient_part_from_text<S>(detail::next_token(in, "coefficient"));
      auto im = detail::coefficient_part_from_text<S>(detail::next_token(in, "coefficient"));
      p.add_term(std::move(m), S{re, im});
    }
    polys.push_back(std::move(p));
  }
  return PolySystem<S>(std::move(polys));
}

template <class S>
std::vector<Point<S>> read_alphacertified_points(std::istream& in, std::size_t n_vars) {
  using Traits = ScalarTraits<S>;
  std::size_t count = std::stoul(detail::next_token(in, "point count"));
  std::vector<Point<S>> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Point<S> p;
    p.coords.reserve(n_vars);
    for (std::size_t j = 0; j < n_vars; ++j) {
      auto re = detail::coefficient_part_from_text<S>(detail::next_token(in, "coordinate"));
      auto im = detail::coefficient_part_from_text<S>(detail::next_token(in, "coordinate"));
      p.coords.push_back(S{re, im});
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace numcert

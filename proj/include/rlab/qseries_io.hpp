#pragma once

// Text and JSON forms of q-series.
//
// Text: optional "# denom D" and "# cutoff T" header lines, then one
// "exponent<TAB>coefficient" line per term, exponents as "p/q".

#include "rlab/qseries.hpp"
#include "rlab/rational_function.hpp"

#include <json.hpp>

#include <string>

namespace rlab {

std::string coefficient_text(const Rational& c);
std::string coefficient_text(const CycRat& c);
std::string coefficient_text(const LaurentZ& c);
std::string coefficient_text(const RationalZ& c);

LaurentZ parse_laurent(const std::string& text);

template <class C>
std::string series_text(const QSeries<C>& s) {
  std::string out = "# denom " + std::to_string(s.denom()) + "\n";
  out += "# cutoff " + (s.cutoff() ? to_string(*s.cutoff()) : std::string("exact")) + "\n";
  for (const auto& [k, c] : s.terms()) out += to_string(s.exponent_of(k)) + "\t" + coefficient_text(c) + "\n";
  return out;
}

template <class C>
nlohmann::json series_json(const QSeries<C>& s) {
  nlohmann::json j;
  j["denom"] = s.denom();
  j["cutoff"] = s.cutoff() ? nlohmann::json(to_string(*s.cutoff())) : nlohmann::json(nullptr);
  j["terms"] = nlohmann::json::array();
  for (const auto& [k, c] : s.terms())
    j["terms"].push_back({{"exponent", to_string(s.exponent_of(k))}, {"coefficient", coefficient_text(c)}});
  return j;
}

/// Parsers for the coefficient rings that have a text form.
template <class C>
C parse_coefficient(const std::string& text);
template <>
Rational parse_coefficient<Rational>(const std::string& text);
template <>
CycRat parse_coefficient<CycRat>(const std::string& text);
template <>
LaurentZ parse_coefficient<LaurentZ>(const std::string& text);

template <class C>
QSeries<C> parse_series_text(const std::string& text);

template <class C>
QSeries<C> parse_series_json(const nlohmann::json& j);

extern template QSeries<Rational> parse_series_text<Rational>(const std::string&);
extern template QSeries<CycRat> parse_series_text<CycRat>(const std::string&);
extern template QSeries<LaurentZ> parse_series_text<LaurentZ>(const std::string&);
extern template QSeries<Rational> parse_series_json<Rational>(const nlohmann::json&);
extern template QSeries<CycRat> parse_series_json<CycRat>(const nlohmann::json&);
extern template QSeries<LaurentZ> parse_series_json<LaurentZ>(const nlohmann::json&);

}  // namespace rlab

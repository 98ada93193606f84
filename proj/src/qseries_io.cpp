#include "rlab/qseries_io.hpp"

#include <sstream>

namespace rlab {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string coefficient_text(const Rational& c) { return to_string(c); }

std::string coefficient_text(const CycRat& c) { return c.is_rational() ? to_string(c.to_rational()) : c.str(); }

std::string coefficient_text(const LaurentZ& c) { return c.str(); }

std::string coefficient_text(const RationalZ& c) { return c.str(); }

LaurentZ parse_laurent(const std::string& text) {
  LaurentZ out;
  std::string s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty Laurent polynomial");
  if (s == "0") return out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    auto next = s.find(" + ", pos);
    std::string term = trim(s.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
    auto star = term.rfind("*z^(");
    int key = 0;
    std::string coeff = term;
    if (star != std::string::npos) {
      if (term.back() != ')') throw std::invalid_argument("malformed Laurent term: " + term);
      Rational e = parse_rational(term.substr(star + 4, term.size() - star - 5));
      Rational twice = 2 * e;
      if (twice.get_den() != 1) throw std::invalid_argument("z-exponent not a half-integer: " + term);
      key = static_cast<int>(to_long(twice.get_num()));
      coeff = term.substr(0, star);
    }
    out.add_term(key, CycRat::parse(coeff));
    if (next == std::string::npos) break;
    pos = next + 3;
  }
  return out;
}

template <>
Rational parse_coefficient<Rational>(const std::string& text) {
  return parse_rational(text);
}
template <>
CycRat parse_coefficient<CycRat>(const std::string& text) {
  return CycRat::parse(text);
}
template <>
LaurentZ parse_coefficient<LaurentZ>(const std::string& text) {
  return parse_laurent(text);
}

template <class C>
QSeries<C> parse_series_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  long denom = 1;
  Cutoff cutoff;
  std::vector<std::pair<Rational, C>> terms;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty()) continue;
    try {
      if (t[0] == '#') {
        std::istringstream h(t.substr(1));
        std::string key, val;
        h >> key >> val;
        if (key == "denom") denom = std::stol(val);
        if (key == "cutoff" && val != "exact") cutoff = parse_rational(val);
        continue;
      }
      auto tab = line.find('\t');
      if (tab == std::string::npos) throw std::invalid_argument("expected exponent<TAB>coefficient");
      terms.emplace_back(parse_rational(line.substr(0, tab)), parse_coefficient<C>(line.substr(tab + 1)));
    } catch (const std::exception& e) {
      throw std::invalid_argument("series line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  QSeries<C> out(denom, cutoff);
  for (auto& [e, c] : terms) out.add_term(e, c);
  return out;
}

template <class C>
QSeries<C> parse_series_json(const nlohmann::json& j) {
  long denom = j.value("denom", 1L);
  Cutoff cutoff;
  if (j.contains("cutoff") && !j["cutoff"].is_null()) cutoff = parse_rational(j["cutoff"].get<std::string>());
  QSeries<C> out(denom, cutoff);
  for (const auto& t : j.at("terms"))
    out.add_term(parse_rational(t.at("exponent").get<std::string>()),
                 parse_coefficient<C>(t.at("coefficient").get<std::string>()));
  return out;
}

template QSeries<Rational> parse_series_text<Rational>(const std::string&);
template QSeries<CycRat> parse_series_text<CycRat>(const std::string&);
template QSeries<LaurentZ> parse_series_text<LaurentZ>(const std::string&);
template QSeries<Rational> parse_series_json<Rational>(const nlohmann::json&);
template QSeries<CycRat> parse_series_json<CycRat>(const nlohmann::json&);
template QSeries<LaurentZ> parse_series_json<LaurentZ>(const nlohmann::json&);

}  // namespace rlab

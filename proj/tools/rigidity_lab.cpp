// rigidity-lab: command-line front end of the library.
//
// Exit status: 0 success, 1 a mathematical check failed, 2 bad input.

#include "rlab/acceptance.hpp"
#include "rlab/characters.hpp"
#include "rlab/genus.hpp"
#include "rlab/lattice.hpp"
#include "rlab/numeric_checks.hpp"
#include "rlab/oracle.hpp"
#include "rlab/qseries_io.hpp"
#include "rlab/theta.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <thread>

using namespace rlab;
using nlohmann::json;

namespace {

class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string order = "6";
  long conductor_cap = 10000;
  double tolerance = 1e-6;
  std::string output = "text";
  unsigned seed = 1;

  bool as_json() const { return output == "json"; }
};

std::string models_dir() {
  if (const char* env = std::getenv("RIGIDITY_LAB_MODELS")) return env;
  return RLAB_MODELS_DIR;
}

// A path as given, else relative to the shipped models directory.
std::string resolve(const std::string& path) {
  namespace fs = std::filesystem;
  if (fs::exists(path)) return path;
  for (const std::string& cand : {models_dir() + "/" + path, models_dir() + "/" + path + ".json"})
    if (fs::exists(cand)) return cand;
  throw InputError("no such file: " + path);
}

EvenLattice lattice_arg(const std::string& arg) {
  namespace fs = std::filesystem;
  if (!fs::exists(arg)) {
    try {
      return standard_lattice(arg);
    } catch (const std::exception&) {
    }
  }
  return load_lattice(resolve(arg));
}

Rational positive_order(const std::string& text) {
  Rational r = parse_rational(text);
  if (r < 1) throw InputError("order must be at least 1");
  return r;
}

RatVec rat_list(const std::string& text) {
  RatVec out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(parse_rational(item));
  return out;
}

// "0.2", "1.5i", "0.1+1.2i", "-0.3-0.02i"
cplx parse_complex(std::string s) {
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  if (s.empty()) throw InputError("empty complex number");
  std::size_t used = 0;
  try {
    if (s.back() != 'i') {
      double re = std::stod(s, &used);
      if (used != s.size()) throw InputError("malformed complex number: " + s);
      return re;
    }
    std::string body = s.substr(0, s.size() - 1);
    std::size_t split = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;)
      if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
        split = k;
        break;
      }
    double re = 0.0;
    std::string im_text = body;
    if (split != std::string::npos) {
      re = std::stod(body.substr(0, split), &used);
      if (used != split) throw InputError("malformed complex number: " + s);
      im_text = body.substr(split);
    }
    if (im_text.empty() || im_text == "+") return {re, 1.0};
    if (im_text == "-") return {re, -1.0};
    double im = std::stod(im_text, &used);
    if (used != im_text.size()) throw InputError("malformed complex number: " + s);
    return {re, im};
  } catch (const std::logic_error&) {
    throw InputError("malformed complex number: " + s);
  }
}

std::string complex_text(cplx z) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g%+.15gi", z.real(), z.imag());
  return buf;
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

std::vector<std::pair<cplx, cplx>> parse_points(const std::vector<std::string>& items) {
  std::vector<std::pair<cplx, cplx>> out;
  for (const auto& p : items) {
    auto comma = p.find(',');
    if (comma == std::string::npos) throw InputError("a point is \"t,tau\": " + p);
    cplx tau = parse_complex(p.substr(comma + 1));
    if (tau.imag() <= 0) throw InputError("Im tau must be positive: " + p);
    out.emplace_back(parse_complex(p.substr(0, comma)), tau);
  }
  return out;
}

const std::vector<std::string> kDefaultPoints = {"0.2,1.5i", "0.13+0.05i,0.1+1.2i", "-0.31+0.02i,-0.2+1.1i"};

template <class C>
void print_series(const RunConfig& cfg, const QSeries<C>& s) {
  if (cfg.as_json())
    std::cout << series_json(s).dump(2) << "\n";
  else
    std::cout << series_text(s);
}

int print_report(const RunConfig& cfg, const Report& rep) {
  if (cfg.as_json())
    std::cout << rep.json().dump(2) << "\n";
  else
    std::cout << rep.text();
  return rep.passed() ? 0 : 1;
}

int print_reports(const RunConfig& cfg, const std::vector<Report>& reps, json extra = json::object()) {
  bool ok = true;
  for (const auto& r : reps) ok = ok && r.passed();
  if (cfg.as_json()) {
    extra["passed"] = ok;
    extra["reports"] = json::array();
    for (const auto& r : reps) extra["reports"].push_back(r.json());
    std::cout << extra.dump(2) << "\n";
  } else {
    for (const auto& r : reps) std::cout << r.text();
  }
  return ok ? 0 : 1;
}

unsigned thread_count() {
  if (const char* env = std::getenv("RIGIDITY_LAB_THREADS")) {
    try {
      long n = std::stol(env);
      if (n >= 1) return static_cast<unsigned>(n);
    } catch (const std::exception&) {
    }
    throw InputError("RIGIDITY_LAB_THREADS must be a positive integer");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// ---- subcommands -----------------------------------------------------------

int cmd_lattice_info(const RunConfig& cfg, const std::string& lat) {
  auto L = lattice_arg(lat);
  auto dd = discriminant_group(L);
  std::vector<long> inv = dd.invariants;
  if (cfg.as_json()) {
    json j = json::parse(lattice_json(L));
    j["determinant"] = determinant(L.gram).get_str();
    j["discriminant_order"] = dd.group_order;
    j["invariants"] = inv;
    j["cosets"] = json::array();
    for (std::size_t g = 0; g < dd.coset_reps.size(); ++g)
      j["cosets"].push_back({{"index", g},
                             {"representative", to_string(dd.coset_reps[g])},
                             {"min_norm_half", to_string(coset_min_norm(L, dd.coset_reps[g]))}});
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::cout << "lattice " << (L.name.empty() ? std::string("(unnamed)") : L.name) << "\n";
  std::cout << "rank " << L.rank << "\n";
  std::cout << "determinant " << determinant(L.gram).get_str() << "\n";
  std::cout << "discriminant group order " << dd.group_order;
  if (!inv.empty()) {
    std::cout << " = ";
    for (std::size_t i = 0; i < inv.size(); ++i) std::cout << (i ? " x " : "") << "Z/" << inv[i];
  }
  std::cout << "\n";
  for (std::size_t g = 0; g < dd.coset_reps.size(); ++g)
    std::cout << "coset " << g << "\t" << to_string(dd.coset_reps[g]) << "\tmin (g,g)/2 = "
              << to_string(coset_min_norm(L, dd.coset_reps[g])) << "\n";
  return 0;
}

std::size_t coset_index(const EvenLattice& L, long g) {
  auto dd = discriminant_group(L);
  if (g < 0 || static_cast<std::size_t>(g) >= dd.coset_reps.size())
    throw InputError("coset index out of range: " + std::to_string(g));
  return static_cast<std::size_t>(g);
}

RatVec h_arg(const EvenLattice& L, const std::string& text) {
  if (text.empty()) return L.zero();
  RatVec h = rat_list(text);
  if (static_cast<int>(h.size()) != L.rank) throw InputError("--h needs " + std::to_string(L.rank) + " entries");
  return h;
}

int cmd_lattice_theta(const RunConfig& cfg, const std::string& lat, long g, const std::string& bound,
                      const std::string& h) {
  auto L = lattice_arg(lat);
  auto rep = discriminant_group(L).coset_reps[coset_index(L, g)];
  print_series(cfg, theta_series(L, rep, ExpCharacter::rational(h_arg(L, h)), std::nullopt, positive_order(bound)));
  return 0;
}

int cmd_char(const RunConfig& cfg, const std::string& lat, long g, const std::string& h, const std::string& shift) {
  auto L = lattice_arg(lat);
  auto rep = discriminant_group(L).coset_reps[coset_index(L, g)];
  std::optional<RatVec> alpha;
  if (!shift.empty()) {
    alpha = rat_list(shift);
    if (static_cast<int>(alpha->size()) != L.rank)
      throw InputError("--tau-shift needs " + std::to_string(L.rank) + " entries");
  }
  print_series(cfg, character(L, rep, ExpCharacter::rational(h_arg(L, h)), alpha, positive_order(cfg.order)));
  return 0;
}

int cmd_zhu(const RunConfig& cfg, int kmax, int imax) {
  if (kmax < 0 || imax < 0) throw InputError("--kmax and --imax must be non-negative");
  auto table = zhu_coefficients(kmax, imax);
  auto rep = zhu_checks(kmax, imax);
  if (cfg.as_json()) {
    json j;
    j["entries"] = json::array();
    for (const auto& [key, c] : table.entries())
      j["entries"].push_back({{"k", std::get<0>(key)}, {"i", std::get<1>(key)}, {"m", std::get<2>(key)},
                              {"c", to_string(c)}});
    j["checks"] = rep.json();
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "k\ti\tm\tc(k,i,m)\n";
    for (const auto& [key, c] : table.entries())
      std::cout << std::get<0>(key) << "\t" << std::get<1>(key) << "\t" << std::get<2>(key) << "\t" << to_string(c)
                << "\n";
    std::cout << rep.text();
  }
  return rep.passed() ? 0 : 1;
}

json genus_json(const GenusSeries& gs) {
  json j;
  j["l"] = gs.l;
  j["cutoff"] = gs.raw.cutoff() ? json(to_string(*gs.raw.cutoff())) : json(nullptr);
  j["reduced"] = gs.reduced_ok();
  if (gs.reduced) {
    j["identically_zero"] = gs.reduced->is_zero();
    j["series"] = series_json(*gs.reduced);
  } else {
    j["failures"] = json::array();
    for (const auto& [e, d] : gs.failures) j["failures"].push_back({{"exponent", to_string(e)}, {"residual", d.str()}});
  }
  return j;
}

int cmd_genus(const RunConfig& cfg, const std::string& model_path, const std::string& check, long shift_a) {
  auto model = load_model(resolve(model_path));
  const Rational T = positive_order(cfg.order);
  auto gs = elliptic_genus(model, T);
  std::vector<Report> reps;
  const bool all = check == "all";
  if (all || check == "rigidity") {
    Report r("rigidity");
    r.merge(rigidity_report(gs));
    reps.push_back(r);
  }
  if (all || check == "shift") {
    Report r("shift law, a = " + std::to_string(shift_a));
    if (gs.reduced_ok())
      r.merge(shift_law_check(model, shift_a, T));
    else
      r.add("not run", false, "F does not reduce to Laurent polynomials");
    reps.push_back(r);
  }
  if (all || check == "oracle") {
    Report r("bundle-expansion oracle");
    if (!model.isolated()) {
      if (!all) throw PreconditionFailed("the bundle-expansion oracle needs isolated fixed points");
      r.add("skipped", true, "fixed components are not isolated");
    } else {
      auto diff = gs.raw - bundle_expansion_oracle(model, T);
      r.add("engine = oracle", diff.is_zero(),
            diff.is_zero() ? "window q^" + to_string(T) : "differs at q^" + to_string(*diff.valuation()));
    }
    auto [e, value] = weight_sum_oracle(model);
    Reduction red = reduce_rational(value);
    bool ok = red.ok() && gs.reduced_ok() && gs.reduced->coefficient(e) == *red.value &&
              (!gs.reduced->valuation() || *gs.reduced->valuation() >= e);
    r.add("lowest coefficient = weight-sum index", ok,
          "q^" + to_string(e) + ": " + (red.ok() ? red.value->str() : value.str()));
    reps.push_back(r);
  }
  if (cfg.as_json()) {
    json j = genus_json(gs);
    j["model"] = model.name;
    return print_reports(cfg, reps, j);
  }
  std::cout << "# model " << model.name << "\n" << genus_text(gs);
  return print_reports(cfg, reps);
}

int cmd_eval(const RunConfig& cfg, const std::string& what, const std::string& model_path, const std::string& lat,
             long g, const std::string& h, const std::vector<std::string>& points) {
  auto pts = parse_points(points.empty() ? kDefaultPoints : points);
  const Rational T = positive_order(cfg.order);
  std::function<EvalResult(cplx, cplx)> f;
  if (what == "eta") {
    auto s = dedekind_eta(T);
    f = [s](cplx, cplx tau) { return eval(s, tau); };
  } else if (what == "theta") {
    auto s = jacobi_theta(T);
    f = [s](cplx t, cplx tau) { return eval(s, tau, t); };
  } else if (what == "char") {
    auto L = lattice_arg(lat);
    auto rep = discriminant_group(L).coset_reps[coset_index(L, g)];
    auto s = character(L, rep, ExpCharacter::rational(h_arg(L, h)), std::nullopt, T);
    f = [s](cplx, cplx tau) { return eval(s, tau); };
  } else if (what == "genus") {
    if (model_path.empty()) throw InputError("--model is required");
    auto gs = elliptic_genus(load_model(resolve(model_path)), T);
    f = [gs](cplx t, cplx tau) { return gs.reduced ? eval(*gs.reduced, tau, t) : eval(gs.raw, tau, t); };
  } else {
    throw InputError("unknown --what: " + what);
  }
  json arr = json::array();
  for (const auto& [t, tau] : pts) {
    EvalResult r = f(t, tau);
    if (cfg.as_json()) {
      arr.push_back({{"t", complex_json(t)}, {"tau", complex_json(tau)}, {"value", complex_json(r.value)},
                     {"tail_bound", r.tail_bound}, {"warn", r.warn}});
    } else {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.2e", r.tail_bound);
      std::cout << "t = " << complex_text(t) << "\ttau = " << complex_text(tau) << "\t" << complex_text(r.value)
                << "\ttail " << buf << (r.warn ? "\twarning: slow convergence" : "") << "\n";
    }
  }
  if (cfg.as_json()) std::cout << json{{"points", arr}}.dump(2) << "\n";
  return 0;
}

int cmd_check_s(const RunConfig& cfg, const std::string& what, const std::string& model_path, const std::string& lat,
                const std::vector<std::string>& points, const std::string& matrix) {
  auto pts = parse_points(points.empty() ? kDefaultPoints : points);
  const double tol = cfg.tolerance;
  if (what == "theta") {
    Report rep("theta S-transformation");
    for (const auto& [t, tau] : pts)
      rep.merge(theta_S_check(t, tau, tol), "(t, tau) = (" + complex_text(t) + ", " + complex_text(tau) + "): ");
    return print_report(cfg, rep);
  }
  if (what == "char") {
    auto L = lattice_arg(lat);
    std::vector<Report> reps;
    json extra = json::object();
    extra["S"] = json::array();
    for (const auto& pt : pts) {
      auto r = character_S_matrix(L, pt.second, tol, cfg.seed);
      Report rep("S-matrix of " + L.name + " at tau = " + complex_text(pt.second));
      rep.merge(r.report);
      reps.push_back(rep);
      json m = json::array();
      for (const auto& row : r.S) {
        json jr = json::array();
        for (cplx x : row) jr.push_back(complex_json(x));
        m.push_back(jr);
      }
      extra["S"].push_back(m);
      if (!cfg.as_json()) {
        for (const auto& row : r.S) {
          for (std::size_t k = 0; k < row.size(); ++k) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "  % .6f%+.6fi", row[k].real(), row[k].imag());
            std::cout << buf;
          }
          std::cout << "\n";
        }
      }
    }
    return print_reports(cfg, reps, extra);
  }
  if (what == "genus") {
    if (model_path.empty()) throw InputError("--model is required");
    auto model = load_model(resolve(model_path));
    auto a = rat_list(matrix);
    if (a.size() != 4) throw InputError("--matrix takes a,b,c,d");
    SL2 A{to_long_exact(a[0]), to_long_exact(a[1]), to_long_exact(a[2]), to_long_exact(a[3])};
    Report rep("Jacobi-form law of " + model.name);
    rep.merge(jacobi_form_check(model, A, pts, tol));
    return print_report(cfg, rep);
  }
  throw InputError("unknown --what: " + what);
}

int cmd_verify(const RunConfig& cfg, bool quick, bool fault, bool no_timing, bool details) {
  AcceptanceConfig ac;
  ac.models_dir = models_dir();
  ac.quick = quick;
  ac.inject_fault = fault;
  ac.timing = !no_timing;
  ac.seed = cfg.seed;
  ac.order = to_long_exact(positive_order(cfg.order));
  ac.threads = thread_count();
  auto results = run_acceptance(ac);
  if (cfg.as_json())
    std::cout << acceptance_json(results, ac.timing).dump(2) << "\n";
  else {
    std::cout << acceptance_text(results, details, ac.timing);
    std::cout << (all_passed(results) ? "all criteria passed\n" : "some criteria failed\n");
  }
  return all_passed(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rigidity-lab: exact q-series, lattice characters and equivariant elliptic genera"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  RunConfig cfg;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--output", cfg.output, "text or json")->check(CLI::IsMember({"text", "json"}));
  };
  auto add_order = [&](CLI::App* sub) { sub->add_option("--order", cfg.order, "q-cutoff T (default 6)"); };
  auto add_numeric = [&](CLI::App* sub) {
    sub->add_option("--tol", cfg.tolerance, "tolerance (default 1e-6)")->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "seed for random sample points");
  };
  app.add_option("--conductor-cap", cfg.conductor_cap, "largest cyclotomic conductor (default 10000)")
      ->check(CLI::PositiveNumber);

  std::string lattice, model, h, shift, bound = "10", check = "all", what;
  long coset = 0, shift_a = 2;
  int kmax = 3, imax = 3;
  bool fault = false, quick = false, no_timing = false, details = false;
  std::vector<std::string> points;
  std::string matrix = "0,-1,1,0";

  auto* eta = app.add_subcommand("eta", "q-expansion of eta");
  auto* theta = app.add_subcommand("theta", "q-expansion of the Jacobi theta function");
  auto* theta_check = app.add_subcommand("theta-check", "exact elliptic and T-shift laws of theta");
  theta_check->add_flag("--inject-fault", fault, "corrupt one coefficient first");
  auto* info = app.add_subcommand("lattice-info", "Gram data and discriminant group");
  auto* ltheta = app.add_subcommand("lattice-theta", "theta series of a coset");
  auto* chr = app.add_subcommand("char", "character theta / eta^c of a lattice module");
  auto* zhu = app.add_subcommand("zhu", "Zhu bracket coefficients c(k,i,m)");
  auto* genus = app.add_subcommand("genus", "equivariant elliptic genus of a fixed-point model");
  auto* ev = app.add_subcommand("eval", "floating-point values at points (t, tau)");
  auto* checks = app.add_subcommand("check-s", "numerical S-transformation checks");
  auto* verify = app.add_subcommand("verify", "run the acceptance battery");

  for (auto* s : {eta, theta, theta_check, ltheta, chr, genus, ev}) add_order(s);
  for (auto* s : {eta, theta, theta_check, info, ltheta, chr, zhu, genus, ev, checks, verify}) add_common(s);
  for (auto* s : {info, ltheta, chr}) s->add_option("--lattice", lattice, "lattice file or A1, A2, D4, E8, gramN")->required();
  for (auto* s : {ltheta, chr}) {
    s->add_option("--coset", coset, "coset index (default 0)");
    s->add_option("--h", h, "elliptic variable, comma-separated rationals");
  }
  ltheta->add_option("--bound", bound, "largest (g,g)/2 (default 10)");
  chr->add_option("--tau-shift", shift, "alpha in h + alpha tau, comma-separated rationals");
  zhu->add_option("--kmax", kmax, "largest k (default 3)");
  zhu->add_option("--imax", imax, "largest i (default 3)");
  genus->add_option("--model", model, "model file")->required();
  genus->add_option("--check", check, "rigidity, shift, oracle, all or none")
      ->check(CLI::IsMember({"rigidity", "shift", "oracle", "all", "none"}));
  genus->add_option("--shift-a", shift_a, "a in t -> t + a tau (default 2)");
  ev->add_option("--what", what, "eta, theta, char or genus")->required();
  ev->add_option("--model", model, "model file (genus)");
  ev->add_option("--lattice", lattice, "lattice (char)");
  ev->add_option("--coset", coset, "coset index (char)");
  ev->add_option("--h", h, "elliptic variable (char)");
  for (auto* s : {ev, checks})
    s->add_option("--point", points, "t,tau with complex entries such as 0.1+1.2i; repeatable");
  checks->add_option("--what", what, "theta, char or genus")->required();
  checks->add_option("--model", model, "model file (genus)");
  checks->add_option("--lattice", lattice, "lattice (char)");
  checks->add_option("--matrix", matrix, "a,b,c,d of an SL2(Z) element (genus; default S)");
  add_numeric(checks);
  verify->add_flag("--quick", quick, "order 2, exact criteria only");
  verify->add_flag("--inject-fault", fault, "corrupt one theta coefficient");
  verify->add_flag("--no-timing", no_timing, "omit runtimes and runtime limits");
  verify->add_flag("--details", details, "list every check");
  verify->add_option("--order", cfg.order, "q-window of the genus criteria (default 6)");
  verify->add_option("--seed", cfg.seed, "seed of the randomized criteria");

  if (argc > 1 && argv[1][0] != '-' && !app.get_subcommand_no_throw(argv[1])) {
    std::cerr << "rigidity-lab: unknown subcommand " << argv[1] << "\nRun with --help for more information.\n";
    return 2;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    set_conductor_cap(cfg.conductor_cap);
    if (*eta) {
      print_series(cfg, dedekind_eta(positive_order(cfg.order)));
      return 0;
    }
    if (*theta) {
      print_series(cfg, jacobi_theta(positive_order(cfg.order)));
      return 0;
    }
    if (*theta_check) {
      Rational T = positive_order(cfg.order);
      Report rep = theta_shift_checks(T, fault);
      Report prime("theta'(0)/2pi = eta^3");
      auto bad = first_mismatch(theta_prime_zero_over_2pi(T), dedekind_eta(T).pow(3));
      prime.add("coefficientwise", !bad, bad ? "first mismatch at q^" + to_string(*bad) : "window q^" + to_string(T));
      return print_reports(cfg, {rep, prime});
    }
    if (*info) return cmd_lattice_info(cfg, lattice);
    if (*ltheta) return cmd_lattice_theta(cfg, lattice, coset, bound, h);
    if (*chr) return cmd_char(cfg, lattice, coset, h, shift);
    if (*zhu) return cmd_zhu(cfg, kmax, imax);
    if (*genus) return cmd_genus(cfg, model, check, shift_a);
    if (*ev) return cmd_eval(cfg, what, model, lattice, coset, h, points);
    if (*checks) return cmd_check_s(cfg, what, model, lattice, points, matrix);
    if (*verify) return cmd_verify(cfg, quick, fault, no_timing, details);
  } catch (const NumericError& e) {
    std::cerr << "rigidity-lab: numerical check could not complete: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "rigidity-lab: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

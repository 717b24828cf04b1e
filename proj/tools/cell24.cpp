// cell24: command-line access to the code constructions, energy scans,
// exact checks and Hessian analysis.

#include "cell24/cell24.hpp"

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#ifndef CELL24_VERSION
#define CELL24_VERSION "dev"
#endif

using namespace cell24;

namespace {

enum Exit { kOk = 0, kVerificationFailed = 1, kUsage = 2 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Argument parsing helpers

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError("not a number: " + s);
  }
  if (used != s.size())
    throw UsageError("not a number: " + s);
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep))
    out.push_back(item);
  return out;
}

/// d4 | ctheta:<theta> | hex:<theta>,<phi>,<psi> | file:<path> | random:<n>:<seed>
Code parse_code(const std::string& spec) {
  if (spec == "d4")
    return d4();
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw UsageError("unknown code specifier: " + spec);
  const std::string kind = spec.substr(0, colon), rest = spec.substr(colon + 1);
  if (kind == "ctheta") {
    Code c = c_theta(ThetaParam{parse_double(rest)});
    c.set_label(spec);
    return c;
  }
  if (kind == "hex") {
    const auto parts = split(rest, ',');
    if (parts.size() != 3)
      throw UsageError("hex: needs three angles");
    return hex_design({parse_double(parts[0]), parse_double(parts[1]), parse_double(parts[2])});
  }
  if (kind == "file")
    return read_code(rest);
  if (kind == "random") {
    const auto parts = split(rest, ':');
    if (parts.size() != 2)
      throw UsageError("random: needs <n>:<seed>");
    try {
      return random_code(std::stoul(parts[0]), std::stoull(parts[1]));
    } catch (const std::logic_error&) {
      throw UsageError("random: bad <n>:<seed>");
    }
  }
  throw UsageError("unknown code specifier: " + spec);
}

Potential potential_arg(const std::string& spec) {
  try {
    return parse_potential(spec);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

// ---------------------------------------------------------------------------
// Output and manifest

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream os;
  for (unsigned i = 0; i < len; ++i)
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

struct Run {
  std::string command;
  std::vector<std::string> args;
  bool json = false;
  std::string out;
  Json seeds = Json::object();
  Json files = Json::array();
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void record_seed(const std::string& name, std::uint64_t s) { seeds[name] = s; }

  void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
      throw std::runtime_error("cannot write " + path);
    f << content;
    files.push_back({{"path", path}, {"sha256", sha256_hex(content)}});
  }

  /// JSON goes to --out when given, else stdout; text only without --json/--out.
  void emit(const std::string& text, const Json& j) {
    if (!out.empty())
      write_file(out, j.dump(2) + "\n");
    else if (json)
      std::cout << j.dump(2) << '\n';
    else
      std::cout << text;
  }

  void finish(int status) {
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    Json m = {{"command", command}, {"args", args},          {"seeds", seeds},
              {"version", CELL24_VERSION}, {"threads", thread_count()}, {"wall_time_ms", ms},
              {"exit_code", status}, {"outputs", files}};
    if (!out.empty()) {
      std::ofstream f(out + ".manifest.json");
      f << m.dump(2) << '\n';
    } else {
      std::cerr << m.dump() << '\n';
    }
  }
};

std::string fmt(double x, int digits = 12) {
  std::ostringstream os;
  os << std::setprecision(digits) << x;
  return os.str();
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energies, designs and exact checks for 24-point codes on S^3", "cell24"};
  app.set_version_flag("--version", std::string(CELL24_VERSION));
  app.require_subcommand(1);

  Run run;
  for (int i = 1; i < argc; ++i)
    run.args.emplace_back(argv[i]);
  int threads = 0;
  app.add_flag("--json", run.json, "Print JSON instead of text");
  app.add_option("--out", run.out, "Write JSON to this path (manifest to <path>.manifest.json)");
  app.add_option("--threads", threads, "Worker thread cap (default: CELL24_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);

  // Shared option storage.
  std::string code_spec = "d4", potential_spec = "riesz:1";
  std::vector<std::string> potential_specs;
  int grid = 10000, k_min = 0, k_max = 74, k_max_design = 8, trials = 200, max_iter = 100000;
  int samples = 5, max_order = 20, positivity_k_max = 100;
  double tol = 1e-8, zero_tol = 1e-6, noise = 0.0, grad_tol = 1e-10, max_step = 1e6;
  std::uint64_t seed = 1;
  std::vector<double> thetas;
  std::string csv_path;
  bool gram = false, trace = false;

  auto* gen = app.add_subcommand("gen", "Emit a code as JSON");
  gen->add_option("--code", code_spec, "Code specifier")->required();
  gen->add_flag("--gram", gram, "Emit the inner-product multiset as CSV instead");

  auto* energy_cmd = app.add_subcommand("energy", "Energy of a code by direct summation");
  energy_cmd->add_option("--code", code_spec, "Code specifier")->required();
  energy_cmd->add_option("--potential", potential_spec, "Potential specifier")->required();

  auto* scan = app.add_subcommand("scan-theta", "Scan E_f(C_theta) over [0, 2 pi)");
  scan->add_option("--potential", potential_spec)->required();
  scan->add_option("--grid", grid, "Grid points")->check(CLI::Range(100, 10000000));
  scan->add_option("--csv", csv_path, "Write theta,energy samples here");

  auto* best = app.add_subcommand("best-theta", "Lowest C_theta energy and its margin over D4");
  best->add_option("--potential", potential_specs, "One or more potential specifiers")->required();
  best->add_option("--grid", grid)->check(CLI::Range(100, 10000000));

  auto* design = app.add_subcommand("design-strength", "Spherical design strength of a code");
  design->add_option("--code", code_spec)->required();
  design->add_option("--k-max", k_max_design)->check(CLI::Range(1, 100));
  design->add_option("--tol", tol)->check(CLI::PositiveNumber);

  auto* prop = app.add_subcommand("proposition", "Exact comparison of D4 and C_theta for (1+t)^k");
  prop->add_option("--k-min", k_min)->check(CLI::Range(0, 1000));
  prop->add_option("--k-max", k_max)->check(CLI::Range(0, 1000));

  auto* k3 = app.add_subcommand("k3-identity", "Exact k = 3 sextic factorization");

  int tail_min = 75, tail_max = 200;
  auto* tail = app.add_subcommand("tail-criterion", "Large-k criterion in Q(sqrt 7)");
  tail->add_option("--k-min", tail_min)->check(CLI::Range(1, 100000));
  tail->add_option("--k-max", tail_max)->check(CLI::Range(1, 100000));

  auto* three = app.add_subcommand("three-design", "Roots of the sextic and the 3-design angle");

  int lemma_min = 0, lemma_max = 40;
  auto* lemma = app.add_subcommand("lemma", "Six-term hexagon sum: constancy and minimum");
  lemma->add_option("--k-min", lemma_min)->check(CLI::Range(0, 1000));
  lemma->add_option("--k-max", lemma_max)->check(CLI::Range(0, 1000));
  lemma->add_option("--grid", grid)->check(CLI::Range(10, 10000000));

  auto* genfun = app.add_subcommand("genfun-check", "Generating-function identity for the hexagon sum");
  genfun->add_option("--theta", thetas, "Angles to test (default: random)");
  genfun->add_option("--samples", samples, "Random angles when --theta is absent")->check(CLI::Range(1, 10000));
  genfun->add_option("--seed", seed);
  genfun->add_option("--max-order", max_order)->check(CLI::Range(6, 200));

  auto* hess = app.add_subcommand("hessian", "Hessian spectrum of a code");
  hess->add_option("--code", code_spec)->required();
  hess->add_option("--potential", potential_spec)->required();
  hess->add_option("--zero-tol", zero_tol, "Zero threshold relative to the spectral radius")
      ->check(CLI::PositiveNumber);
  hess->add_option("--csv", csv_path, "Write eigenvalues here");

  auto* table = app.add_subcommand("hessian-table", "Closed-form D4 Hessian eigenvalues vs numeric");
  table->add_option("--potential", potential_specs)->default_val(std::vector<std::string>{"riesz:1", "pow1:6", "exp:6"});
  table->add_option("--positivity-k-max", positivity_k_max)->check(CLI::Range(6, 10000));

  auto* desc = app.add_subcommand("descend", "Projected gradient descent");
  desc->add_option("--code", code_spec)->required();
  desc->add_option("--potential", potential_spec)->required();
  desc->add_option("--noise", noise, "Random tangent perturbation of the start")->check(CLI::NonNegativeNumber);
  desc->add_option("--seed", seed);
  desc->add_option("--max-iter", max_iter)->check(CLI::PositiveNumber);
  desc->add_option("--grad-tol", grad_tol)->check(CLI::PositiveNumber);
  desc->add_option("--max-step", max_step, "Upper bound on the step length")->check(CLI::PositiveNumber);
  desc->add_flag("--trace", trace, "Include the accepted energies");

  auto* basin = app.add_subcommand("basin", "Descents from random codes, classified");
  basin->add_option("--potential", potential_spec);
  basin->add_option("--trials", trials)->check(CLI::Range(1, 1000000));
  basin->add_option("--seed", seed);

  auto* crit = app.add_subcommand("critical-points", "Critical points of the C_theta family");
  crit->add_option("--potential", potential_spec);

  auto* resid = app.add_subcommand("gradient-residual", "Full gradient vs the family tangent space");
  resid->add_option("--potential", potential_spec);
  resid->add_option("--theta", thetas, "Angles (default: random valid)");
  resid->add_option("--samples", samples)->check(CLI::Range(1, 10000));
  resid->add_option("--seed", seed);

  auto* hexc = app.add_subcommand("hexagon-claim", "Disjoint hexagons of D4 and Eisenstein partitions");

  auto* hopf = app.add_subcommand("hopf", "Hopf projection of a code to S^2");
  hopf->add_option("--code", code_spec)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  if (threads > 0)
    set_thread_count(static_cast<unsigned>(threads));
  run.command = app.get_subcommands().front()->get_name();

  int status = kOk;
  try {
    std::ostringstream text;
    Json j;
    auto random_thetas = [&](int n) {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
      std::vector<double> out;
      while (static_cast<int>(out.size()) < n) {
        const double t = u(rng);
        if (c_theta_t_max(t) < 0.99)
          out.push_back(t);
      }
      return out;
    };

    if (*gen) {
      const Code c = parse_code(code_spec);
      if (gram) {
        const auto s = inner_product_multiset(c);
        run.emit(to_csv(s), to_json(s));
      } else {
        j = to_json(c);
        run.emit(j.dump(2) + "\n", j);
      }
    } else if (*energy_cmd) {
      const Code c = parse_code(code_spec);
      const Potential f = potential_arg(potential_spec);
      const double e = energy(c, f);
      j = {{"code", c.label()}, {"potential", to_string(f)}, {"energy", e}};
      text << fmt(e) << '\n';
      run.emit(text.str(), j);
    } else if (*scan) {
      const Potential f = potential_arg(potential_spec);
      const auto res = scan_theta(f, grid);
      const double ed4 = energy_d4_closed(f);
      if (!csv_path.empty()) {
        std::ostringstream csv;
        csv << "theta,energy\n";
        for (const auto& s : res.samples)
          csv << format_double(s.theta) << ',' << format_double(s.energy) << '\n';
        run.write_file(csv_path, csv.str());
      }
      Json minima = Json::array();
      text << "theta energy margin_vs_d4\n";
      for (const auto& m : res.minima) {
        minima.push_back({{"theta", m.theta}, {"energy", m.energy}, {"margin_vs_d4", ed4 - m.energy}});
        text << fmt(m.theta, 10) << ' ' << fmt(m.energy, 10) << ' ' << fmt(ed4 - m.energy, 8) << '\n';
      }
      const auto g = res.global_min();
      j = {{"potential", to_string(f)}, {"grid", grid}, {"energy_d4", ed4}, {"minima", minima},
           {"global_min", {{"theta", g.theta}, {"energy", g.energy}, {"margin_vs_d4", ed4 - g.energy}}}};
      text << "global minimum: theta " << fmt(g.theta, 10) << " energy " << fmt(g.energy, 10) << '\n';
      run.emit(text.str(), j);
    } else if (*best) {
      j = Json::array();
      text << "potential theta energy margin_vs_d4\n";
      for (const auto& spec : potential_specs) {
        const Potential f = potential_arg(spec);
        const auto b = best_theta_vs_d4(f, grid);
        j.push_back({{"potential", to_string(f)}, {"theta", b.theta}, {"energy", b.energy}, {"margin", b.margin}});
        text << to_string(f) << ' ' << fmt(b.theta, 10) << ' ' << fmt(b.energy, 10) << ' ' << fmt(b.margin, 8)
             << '\n';
      }
      run.emit(text.str(), j);
    } else if (*design) {
      const Code c = parse_code(code_spec);
      const auto rep = design_strength(c, k_max_design, tol);
      j = to_json(rep);
      for (const auto& d : rep.defects)
        text << "k=" << d.k << " defect " << fmt(d.defect, 6) << '\n';
      text << "strength " << rep.strength << '\n';
      run.emit(text.str(), j);
    } else if (*prop) {
      if (k_min > k_max)
        throw UsageError("--k-min exceeds --k-max");
      std::vector<exact::PropositionRow> rows(static_cast<std::size_t>(k_max - k_min + 1));
      // Largest k first so the long rows start early.
      parallel_for(rows.size(), [&](std::size_t i) {
        const int k = k_max - static_cast<int>(i);
        rows[static_cast<std::size_t>(k - k_min)] = exact::proposition_row(k);
      });
      j = Json::array();
      text << "k attains_positive numerator_degree wall_time_ms\n";
      for (const auto& r : rows) {
        j.push_back({{"k", r.k}, {"attains_positive", r.attains_positive},
                     {"wall_time_ms", r.wall_time_ms}, {"numerator_degree", r.numerator_degree}});
        text << r.k << ' ' << (r.attains_positive ? "true" : "false") << ' ' << r.numerator_degree << ' '
             << fmt(r.wall_time_ms, 6) << '\n';
        if (r.attains_positive != (r.k >= 8 && r.k <= 13))
          status = kVerificationFailed;
      }
      text << (status == kOk ? "C_theta beats D4 exactly for k = 8..13 within the range\n"
                             : "MISMATCH with the expected set k = 8..13\n");
      run.emit(text.str(), j);
    } else if (*k3) {
      const bool ok = exact::verify_k3_identity();
      const auto sextic = exact::k3_sextic();
      j = {{"identity", "E(D4) - E(C_theta) = -18 s(u)^2 / (u^2+1)^6"},
           {"sextic", sextic.to_strings()},
           {"holds", ok}};
      text << "sextic " << sextic.to_string() << "\nidentity " << (ok ? "holds" : "FAILS") << '\n';
      status = ok ? kOk : kVerificationFailed;
      run.emit(text.str(), j);
    } else if (*tail) {
      if (tail_min > tail_max)
        throw UsageError("--k-min exceeds --k-max");
      Json rows = Json::array();
      bool all = true;
      for (int k = tail_min; k <= tail_max; ++k) {
        const bool h = exact::tail_criterion(k);
        all = all && h;
        rows.push_back({{"k", k}, {"holds", h}});
      }
      const bool step = exact::tail_induction_step_holds();
      const std::string note =
          "(2+sqrt7)/3 > 3/2, so once 18((2+sqrt7)/3)^k exceeds the D4 energy it does so for every larger k";
      j = {{"k_min", tail_min}, {"k_max", tail_max}, {"all_hold", all}, {"induction_step", step},
           {"induction_note", note}, {"rows", rows}};
      text << "criterion holds for k = " << tail_min << ".." << tail_max << ": " << yes_no(all) << '\n'
           << "induction step: " << yes_no(step) << "\n" << note << '\n';
      status = (all && step) ? kOk : kVerificationFailed;
      run.emit(text.str(), j);
    } else if (*three) {
      const auto r = exact::three_design_roots();
      Json roots = Json::array();
      text << "sextic real roots: " << r.real_root_count << '\n';
      for (const auto& s : r.roots) {
        roots.push_back({{"u", s.u}, {"sin", s.sin_theta}, {"cos", s.cos_theta}, {"theta", s.theta},
                         {"sin3_plus_cos3", s.cube_sum}});
        text << "u " << fmt(s.u, 10) << " sin " << fmt(s.sin_theta, 10) << " cos " << fmt(s.cos_theta, 10)
             << " theta " << fmt(s.theta, 10) << " sin^3+cos^3 " << fmt(s.cube_sum, 15) << '\n';
      }
      const bool ok = r.real_root_count == 2 && r.same_code &&
                      std::all_of(r.roots.begin(), r.roots.end(),
                                  [](const auto& s) { return std::abs(s.cube_sum + 1.0 / 3.0) < 1e-8; });
      j = {{"real_root_count", r.real_root_count}, {"roots", roots}, {"same_code", r.same_code},
           {"cubic_root", r.cubic_root}, {"verified", ok}};
      text << "both roots give one code: " << yes_no(r.same_code) << "\nroot of 3y^3-9y-2 in [-1,0]: "
           << fmt(r.cubic_root, 12) << '\n';
      status = ok ? kOk : kVerificationFailed;
      run.emit(text.str(), j);
    } else if (*lemma) {
      if (lemma_min > lemma_max)
        throw UsageError("--k-min exceeds --k-max");
      j = Json::array();
      bool ok = true;
      for (int k = lemma_min; k <= lemma_max; ++k) {
        if (k <= 5) {
          double lo = 1e300, hi = -1e300;
          for (int i = 0; i < grid; ++i) {
            const double v = lemma_sum(k, 2.0 * kPi * i / grid);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
          }
          const bool c = hi - lo < 1e-10 * std::max(1.0, std::abs(hi));
          ok = ok && c;
          j.push_back({{"k", k}, {"constant", c}, {"spread", hi - lo}, {"value", hi}});
          text << "k=" << k << " constant " << yes_no(c) << " spread " << fmt(hi - lo, 3) << '\n';
        } else {
          const auto m = lemma_minimum(k, grid);
          const bool c = std::abs(m.argmin - kPi / 6) < 1e-8 && m.grid_local_minima == 1;
          ok = ok && c;
          j.push_back({{"k", k}, {"argmin", m.argmin}, {"value", m.value}, {"unique", m.grid_local_minima == 1},
                       {"at_pi_over_6", c}});
          text << "k=" << k << " argmin " << fmt(m.argmin, 12) << " unique " << yes_no(m.grid_local_minima == 1)
               << '\n';
        }
      }
      status = ok ? kOk : kVerificationFailed;
      run.emit(text.str(), j);
    } else if (*genfun) {
      std::vector<double> ts = thetas;
      if (ts.empty()) {
        run.record_seed("theta", seed);
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(0.0, kPi / 3);
        for (int i = 0; i < samples; ++i)
          ts.push_back(u(rng));
      }
      j = Json::array();
      bool ok = true;
      for (double t : ts) {
        const double d = lemma_genfun_check(t, max_order);
        ok = ok && d < 1e-10;
        j.push_back({{"theta", t}, {"max_order", max_order}, {"discrepancy", d}});
        text << "theta " << fmt(t, 10) << " discrepancy " << fmt(d, 3) << '\n';
      }
      status = ok ? kOk : kVerificationFailed;
      run.emit(text.str(), j);
    } else if (*hess) {
      const Code c = parse_code(code_spec);
      const Potential f = potential_arg(potential_spec);
      const auto s = hessian_spectrum(c, f, zero_tol);
      if (!csv_path.empty())
        run.write_file(csv_path, to_csv(s));
      j = to_json(s);
      j["gradient_norm"] = gradient_norm(c, f);
      text << "negative " << s.negative_count << " zero " << s.zero_count << " positive " << s.positive_count
           << " (zero tol " << fmt(s.zero_tol, 3) << ")\n";
      for (const auto& cl : s.clusters())
        text << fmt(cl.value, 10) << " x" << cl.multiplicity << '\n';
      run.emit(text.str(), j);
    } else if (*table) {
      j = {{"potentials", Json::array()}};
      bool ok = true;
      for (const auto& spec : potential_specs) {
        const Potential f = potential_arg(spec);
        const auto numeric = hessian_spectrum(d4(), f);
        const auto closed = expand(d4_hessian_closed_form(f));
        double worst = 0.0;
        for (std::size_t i = 0; i < closed.size(); ++i)
          worst = std::max(worst, std::abs(numeric.eigenvalues[i] - closed[i]) / numeric.spectral_radius);
        const bool match = worst < 1e-6;
        ok = ok && match;
        Json rows = Json::array();
        for (const auto& e : d4_hessian_closed_form(f))
          rows.push_back({{"value", e.value}, {"multiplicity", e.multiplicity}});
        j["potentials"].push_back({{"potential", to_string(f)}, {"closed_form", rows},
                                   {"max_relative_error", worst}, {"match", match}});
        text << to_string(f) << ": closed form vs numeric, max relative error " << fmt(worst, 3) << '\n';
        for (const auto& e : d4_hessian_closed_form(f))
          text << "  " << fmt(e.value, 10) << " x" << e.multiplicity << '\n';
      }
      int first_bad = -1;
      for (int k = 6; k <= positivity_k_max && first_bad < 0; ++k)
        for (const auto& e : d4_hessian_closed_form(PowPlus{k}))
          if (e.multiplicity != 6 && !(e.value > 0)) {
            first_bad = k;
            break;
          }
      const int k5_zero = hessian_spectrum(d4(), PowPlus{5}, 1e-8).zero_count;
      ok = ok && first_bad < 0 && k5_zero > 6;
      j["positive_for_pow1_6_to"] = positivity_k_max;
      j["all_positive"] = first_bad < 0;
      j["pow1_5_zero_count"] = k5_zero;
      text << "nonzero eigenvalues positive for pow1:6.." << positivity_k_max << ": " << yes_no(first_bad < 0)
           << "\npow1:5 zero eigenvalues: " << k5_zero << '\n';
      status = ok ? kOk : kVerificationFailed;
      run.emit(text.str(), j);
    } else if (*desc) {
      Code start = parse_code(code_spec);
      const Potential f = potential_arg(potential_spec);
      if (noise > 0) {
        run.record_seed("noise", seed);
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> normal;
        TangentBasis basis(start);
        Eigen::VectorXd coords(static_cast<Eigen::Index>(3 * start.size()));
        for (auto& x : coords)
          x = normal(rng);
        const auto v = basis.lift(coords * (noise / coords.norm()));
        start = detail::retract(start, v, 1.0);
      }
      DescentOptions opts;
      opts.max_iterations = max_iter;
      opts.gradient_tol = grad_tol;
      opts.max_step = max_step;
      opts.initial_step = std::min(opts.initial_step, max_step);
      opts.record_energies = trace;
      auto r = descend(start, f, opts);
      r.label = classify(r.code, basin_references(f));
      j = to_json(r);
      text << "energy " << fmt(r.energy, 12) << " iterations " << r.iterations << " gradient " << fmt(r.gradient_norm, 3)
           << (r.converged ? "" : r.stalled ? " (stalled)" : " (iteration cap)") << " label " << r.label << '\n';
      run.emit(text.str(), j);
    } else if (*basin) {
      const Potential f = potential_arg(potential_spec);
      run.record_seed("basin", seed);
      const auto s = basin_experiment(f, trials, seed);
      j = to_json(s);
      j["potential"] = to_string(f);
      text << "trials " << trials << " seed " << seed << '\n';
      for (const auto& [label, n] : s.counts)
        text << label << ' ' << n << " (" << fmt(s.fraction(label), 4) << ")\n";
      text << "final energies:\n";
      for (const auto& [e, n] : s.energy_histogram)
        text << "  " << fmt(e, 10) << " x" << n << '\n';
      run.emit(text.str(), j);
    } else if (*crit) {
      const Potential f = potential_arg(potential_spec);
      const auto pts = theta_critical_points(f);
      j = Json::array();
      text << "theta energy family_min negative zero gradient_norm\n";
      for (const auto& p : pts) {
        j.push_back({{"theta", p.theta}, {"energy", p.energy}, {"family_minimum", p.family_minimum},
                     {"family_curvature", p.family_curvature}, {"negative_count", p.negative_count},
                     {"zero_count", p.zero_count}, {"gradient_norm", p.gradient_norm},
                     {"eigenvalues", p.spectrum.eigenvalues}});
        text << fmt(p.theta, 10) << ' ' << fmt(p.energy, 10) << ' ' << yes_no(p.family_minimum) << ' '
             << p.negative_count << ' ' << p.zero_count << ' ' << fmt(p.gradient_norm, 3) << '\n';
      }
      run.emit(text.str(), j);
    } else if (*resid) {
      const Potential f = potential_arg(potential_spec);
      std::vector<double> ts = thetas;
      if (ts.empty()) {
        run.record_seed("theta", seed);
        ts = random_thetas(samples);
      }
      j = Json::array();
      for (double t : ts) {
        const double r = family_gradient_residual(t, f);
        j.push_back({{"theta", t}, {"residual", r}});
        text << "theta " << fmt(t, 10) << " residual " << fmt(r, 3) << '\n';
      }
      run.emit(text.str(), j);
    } else if (*hexc) {
      const auto r = disjoint_hexagon_claim();
      j = to_json(r);
      text << "hexagons " << r.hexagons.size() << ", Eisenstein partitions " << r.partitions.size()
           << ", disjoint pairs " << r.pairs.size() << '\n'
           << "every disjoint pair lies in a partition: " << yes_no(r.holds) << '\n';
      status = r.holds ? kOk : kVerificationFailed;
      run.emit(text.str(), j);
    } else if (*hopf) {
      const Code c = parse_code(code_spec);
      j = Json::array();
      for (const auto& p : hopf_project(c)) {
        j.push_back({p.y0, p.y1, p.y2});
        text << format_double(p.y0) << ',' << format_double(p.y1) << ',' << format_double(p.y2) << '\n';
      }
      run.emit(text.str(), j);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    status = kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    status = kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    status = kVerificationFailed;
  }
  run.finish(status);
  return status;
}

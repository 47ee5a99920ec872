#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ruelle/error.hpp"
#include "ruelle/floquet.hpp"
#include "ruelle/model_io.hpp"
#include "ruelle/oracle.hpp"
#include "ruelle/quiver.hpp"
#include "ruelle/spectrum.hpp"
#include "ruelle/states.hpp"

namespace lab {

using namespace ruelle;

namespace {

FlowModel load(const Options& o, bool validate = true) {
  FlowModel m = load_model(o.model);
  if (o.mode == "float") {
    m = to_floating(m);
  } else if (o.mode == "exact") {
    if (!m.all_exact()) throw InvariantError("exact mode: the model contains inexact numbers");
    m.mode = ArithmeticMode::exact;
  }
  if (validate) require_valid(m);
  return m;
}

void check_k(const FlowModel& m, int k) {
  if (k < 0 || k > m.dim) throw UsageError("--k must lie in [0, " + std::to_string(m.dim) + "]");
}

double require_t(const std::optional<double>& t, const char* flag) {
  if (!t) throw UsageError(std::string(flag) + " is required");
  if (!(*t >= 0.0)) throw UsageError(std::string(flag) + " must be non-negative");
  return *t;
}

void emit(const Options& o, const Table& table) {
  if (o.out.empty()) {
    write_table(std::cout, table, o.format);
    return;
  }
  std::ofstream file(o.out);
  if (!file) throw IoError("cannot write " + o.out);
  write_table(file, table, o.format);
  if (!file) throw IoError("write failed: " + o.out);
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

Table resonance_table(const std::vector<Resonance>& rs) {
  Table t{{"re", "im", "multiplicity", "element", "alpha", "alpha_n", "bundle_j", "epsilon_mask"}, {}};
  for (const Resonance& r : rs) {
    std::vector<Cell> row{r.z.re.value(), r.z.im.value(), std::int64_t{r.multiplicity}};
    if (r.contributions.empty()) {
      row.insert(row.end(), {std::string(), std::string(), std::string(), std::string()});
    } else {
      const Contribution& c = r.contributions.front();
      row.insert(row.end(), {c.element, join(c.alpha), c.alpha_n, std::int64_t{c.witness.bundle},
                             static_cast<std::int64_t>(c.witness.mask)});
    }
    t.add(std::move(row));
  }
  return t;
}

const CriticalElement& pick_element(const FlowModel& m, const std::string& name) {
  if (name.empty()) {
    const auto all = m.elements();
    if (all.empty()) throw InvariantError("the model has no critical elements");
    return *all.front();
  }
  const CriticalElement* e = m.find(name);
  if (!e) throw UsageError("unknown element '" + name + "'");
  return *e;
}

std::vector<std::vector<int>> alphas_up_to(int entries, int depth) {
  std::vector<std::vector<int>> out;
  std::vector<int> a(static_cast<std::size_t>(entries), 0);
  const auto rec = [&](auto&& self, int i, int left) -> void {
    if (i == entries) {
      out.push_back(a);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      a[static_cast<std::size_t>(i)] = v;
      self(self, i + 1, left - v);
    }
    a[static_cast<std::size_t>(i)] = 0;
  };
  rec(rec, 0, depth);
  return out;
}

std::vector<double> parse_row(const std::string& line, int number) {
  std::vector<double> values;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(field, &used));
      if (field.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(field);
    } catch (const std::exception&) {
      throw SchemaError("line " + std::to_string(number) + ": '" + field + "' is not a number");
    }
  }
  return values;
}

}  // namespace

int run_validate(const Options& o) {
  FlowModel m = load(o, false);
  const ValidationReport report = validate_model(m);
  Table t{{"kind", "element", "invariant", "detail"}, {}};
  for (const Violation& v : report.violations) t.add({std::string("violation"), v.element, v.invariant, v.detail});
  for (const Violation& v : report.warnings) t.add({std::string("warning"), v.element, v.invariant, v.detail});
  emit(o, t);
  if (!report.ok()) {
    std::cerr << "invalid model: " << report.summary() << '\n';
    return kInvariant;
  }
  return kOk;
}

int run_spectrum(const Options& o) {
  const FlowModel m = load(o);
  check_k(m, o.k);
  const double t_re = require_t(o.t_re, "--T");
  const double t_im = o.t_im ? require_t(o.t_im, "--T-im") : t_re;
  emit(o, resonance_table(resonances(m, o.k, Box{t_re, t_im}, Labels::first)));
  return kOk;
}

int run_imaginary(const Options& o) {
  const FlowModel m = load(o);
  check_k(m, o.k);
  const double t_im = o.t_im ? require_t(o.t_im, "--T-im") : require_t(o.t_re, "--T-im (or --T)");
  emit(o, resonance_table(imaginary_axis_points(m, o.k, t_im)));
  return kOk;
}

int run_bands(const Options& o) {
  const FlowModel m = load(o);
  check_k(m, o.k);
  const double t_re = require_t(o.t_re, "--T");
  const double t_im = o.t_im ? require_t(o.t_im, "--T-im") : t_re;
  Table t{{"element", "offset_re", "offset_im", "step_im", "phase", "multiplicity"}, {}};
  for (const Band& b : band_decomposition(m, o.k, Box{t_re, t_im})) {
    t.add({b.element, b.offset.re.value(), b.offset.im.value(), b.step_im.value(), b.phase.value(),
           std::int64_t{b.multiplicity}});
  }
  emit(o, t);
  return kOk;
}

int run_weyl(const Options& o) {
  const FlowModel m = load(o);
  check_k(m, o.k);
  const double t = require_t(o.t_re, "--T");
  const WeylPrediction p = weyl_prediction(m, o.k, t, o.seed);
  emit(o, Table{{"count", "prediction"}, {{weyl_count(m, o.k, t), p.value}}});
  return kOk;
}

int run_floquet(const Options& o) {
  if (!(o.period > 0.0)) throw UsageError("--period must be positive");
  std::ifstream in(o.coeff);
  if (!in) throw IoError("cannot read " + o.coeff);
  std::vector<double> theta;
  std::vector<Eigen::MatrixXd> samples;
  std::string line;
  int number = 0;
  Eigen::Index size = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (number == 1 && line.find_first_of("abcdfghijklmnopqrstuvwxyz") != std::string::npos) continue;  // header
    const std::vector<double> v = parse_row(line, number);
    const auto entries = static_cast<Eigen::Index>(v.size()) - 1;
    const auto n = static_cast<Eigen::Index>(std::lround(std::sqrt(static_cast<double>(std::max<Eigen::Index>(entries, 0)))));
    if (entries < 1 || n * n != entries) {
      throw SchemaError("line " + std::to_string(number) + ": expected theta followed by n*n matrix entries");
    }
    if (size == 0) size = n;
    if (n != size) throw SchemaError("line " + std::to_string(number) + ": matrix size changed");
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) a(i, j) = v[static_cast<std::size_t>(1 + i * n + j)];
    theta.push_back(v[0]);
    samples.push_back(std::move(a));
  }
  if (samples.size() < 4) throw SchemaError(o.coeff + ": at least 4 samples are needed");
  const double tol = o.tol.value_or(kFloquetTolerance);
  const PeriodicCoefficient coeff = PeriodicCoefficient::sampled(theta, samples, o.period);
  const FloquetDecomposition dec = floquet_decompose(monodromy(coeff, tol), o.period);
  Table t{{"index", "multiplier_re", "multiplier_im", "lyapunov", "frequency", "twist"}, {}};
  for (std::size_t i = 0; i < dec.multipliers.size(); ++i) {
    t.add({static_cast<std::int64_t>(i), dec.multipliers[i].real(), dec.multipliers[i].imag(), dec.lyapunov[i],
           dec.frequencies[i], to_string(dec.twists[i])});
  }
  emit(o, t);
  return kOk;
}

int run_oracle(const Options& o) {
  const FlowModel m = load(o);
  check_k(m, o.k);
  const CriticalElement& elem = pick_element(m, o.element);
  const Chart chart = make_chart(elem, m.connection);
  const int count = chart.frame.covector_count();
  TestForm psi1, psi2;
  psi2.word = words_of_degree(count, o.k).front();
  psi1.word = complement(psi2.word, count);
  psi1.modes.push_back({Rational(0), GaussianPoly::isotropic(chart.frame.dim)});
  psi2.modes = psi1.modes;

  const auto series = correlation_series(elem, m.connection, o.k, psi1, psi2, default_oracle_grid(elem));
  const PoleEstimate est = extract_poles(series, o.order);
  double reach_re = 1.0, reach_im = 1.0;
  for (const Complex& s : est.exponents) {
    reach_re = std::max(reach_re, -s.real() + 1.0);
    reach_im = std::max(reach_im, std::abs(s.imag()) + 1.0);
  }
  std::vector<Resonance> predicted;
  for (const Resonance& r : resonances(m, o.k, Box{reach_re, reach_im}, Labels::all)) {
    const bool own = std::any_of(r.contributions.begin(), r.contributions.end(),
                                 [&](const Contribution& c) { return c.element == elem.name; });
    if (own) predicted.push_back(r);
  }
  double top = 0.0;
  for (const Complex& a : est.amplitudes) top = std::max(top, std::abs(a));
  const MatchReport report = match_spectrum(est, predicted, o.tol.value_or(1e-3), o.floor * top);

  Table t{{"predicted_re", "predicted_im", "extracted_re", "extracted_im", "abs_err", "amplitude"}, {}};
  for (const PoleMatch& p : report.matched) {
    t.add({p.predicted.real(), p.predicted.imag(), p.extracted.real(), p.extracted.imag(), p.error, std::abs(p.amplitude)});
  }
  for (const UnmatchedPole& u : report.unmatched) {
    t.add({std::string(), std::string(), u.extracted.real(), u.extracted.imag(), std::string(), std::abs(u.amplitude)});
  }
  emit(o, t);
  if (!report.ok()) {
    std::cerr << report.misses.size() << " extracted pole(s) above the amplitude floor match no predicted resonance\n";
    return kMiss;
  }
  return kOk;
}

int run_states_check(const Options& o) {
  const FlowModel m = load(o);
  check_k(m, o.k);
  if (o.depth < 0) throw UsageError("--depth must be non-negative");
  const double tol = o.tol.value_or(1e-8);
  std::vector<const CriticalElement*> elements;
  if (o.element.empty()) {
    elements = m.elements();
  } else {
    elements.push_back(&pick_element(m, o.element));
  }
  Table t{{"element", "alpha", "mask", "lambda_re", "lambda_im", "residual"}, {}};
  bool failed = false;
  std::uint64_t seed = o.seed;
  for (const CriticalElement* e : elements) {
    const Chart chart = make_chart(*e, m.connection);
    const auto alphas = alphas_up_to(static_cast<int>(e->eigenvalues.size()), o.depth);
    for (const GrassmannWord& w : words_of_degree(chart.frame.covector_count(), o.k)) {
      for (int j = 0; j < m.rank(); ++j) {
        for (const auto& alpha : alphas) {
          const LocalState s = build_state(*e, m.connection, alpha, 0, w, j, o.k);
          const double r = check_eigen(s, probe_form(s, seed++), default_time_grid());
          failed = failed || !(r < tol);
          t.add({e->name, join(alpha), static_cast<std::int64_t>(selection_mask(chart.frame, w)),
                 s.eigenvalue.re.value(), s.eigenvalue.im.value(), r});
        }
      }
    }
  }
  emit(o, t);
  if (failed) {
    std::cerr << "eigen-equation residual above " << tol << '\n';
    return kMiss;
  }
  return kOk;
}

int run_quiver_hasse(const Options& o) {
  const FlowModel m = load(o);
  Table t{{"lower", "upper"}, {}};
  for (const Edge& e : hasse(quiver_of(m))) t.add({e.first, e.second});
  emit(o, t);
  return kOk;
}

}  // namespace lab

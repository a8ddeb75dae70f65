#include "thetanorm/recovery.hpp"

#include <json.hpp>

#include <cmath>
#include <random>

namespace thetanorm {

using json = nlohmann::json;

std::span<const LinearMeasurement> MeasurementEnsemble::first(std::size_t m) const {
  if (m > measurements.size())
    throw std::invalid_argument("requested " + std::to_string(m) + " measurements, ensemble has " +
                                std::to_string(measurements.size()));
  return std::span<const LinearMeasurement>(measurements.data(), m);
}

MeasurementEnsemble gaussian_ensemble(const Tensor& truth, std::size_t m, std::uint64_t seed) {
  MeasurementEnsemble e;
  e.shape = truth.shape();
  e.seed = seed;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  e.measurements.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    Tensor a(truth.shape());
    for (double& v : a.values()) v = normal(rng);
    const double b = a.dot(truth);
    e.measurements.push_back({std::move(a), b});
  }
  return e;
}

MeasurementEnsemble parse_measurements(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("measurement document is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("shape") || !doc.contains("measurements"))
    throw std::invalid_argument("measurement document needs fields 'shape' and 'measurements'");
  MeasurementEnsemble e;
  try {
    e.shape = Shape(doc.at("shape").get<std::vector<int>>());
    for (const auto& item : doc.at("measurements")) {
      Tensor a(e.shape, item.at("a").get<std::vector<double>>());
      const double b = item.at("b").get<double>();
      if (!std::isfinite(b)) throw std::invalid_argument("measurement value is not finite");
      e.measurements.push_back({std::move(a), b});
    }
  } catch (const json::exception& ex) {
    throw std::invalid_argument(std::string("malformed measurement document: ") + ex.what());
  }
  return e;
}

std::string format_measurements(const MeasurementEnsemble& e) {
  json doc;
  doc["shape"] = e.shape.dims();
  doc["measurements"] = json::array();
  for (const auto& m : e.measurements)
    doc["measurements"].push_back(
        {{"a", std::vector<double>(m.a.values().begin(), m.a.values().end())}, {"b", m.b}});
  return doc.dump() + "\n";
}

MomentLayout norm_layout(const Shape& shape, PNorm p, int k) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  IdealSpec spec = IdealSpec::for_norm(shape, p);
  if (!p.is_infinite() && 2 * k < p.value())
    throw std::invalid_argument("theta-" + std::to_string(k) + " needs 2k >= p = " + p.to_string());
  return build_moment_layout(build_groebner(spec), k);
}

NormResult evaluate_theta_norm(const MomentLayout& layout, const Tensor& x, const SolverSettings& settings) {
  NormResult r;
  r.solution = solve(assemble_norm_sdp(layout, x), settings);
  r.value = r.solution.objective;
  return r;
}

double theta_norm(const Tensor& x, PNorm p, int k, const SolverSettings& settings) {
  NormResult r = evaluate_theta_norm(norm_layout(x.shape(), p, k), x, settings);
  if (!r.solution.is_optimal())
    throw SolverFailure("theta-norm solve ended with status " + to_string(r.solution.status), r.solution);
  return r.value;
}

double relative_error(const Tensor& a, const Tensor& b) {
  const double denom = b.frobenius_norm();
  const double diff = (a - b).frobenius_norm();
  return denom > 0 ? diff / denom : diff;
}

RecoveryResult recover(const MomentLayout& layout, std::span<const LinearMeasurement> measurements,
                       const SolverSettings& settings, const Tensor* truth) {
  RecoveryResult r;
  r.solution = solve(assemble_recovery_sdp(layout, measurements), settings);
  r.recovered = Tensor(layout.shape());
  if (r.solution.x.size() > 0)
    for (std::size_t a = 0; a < r.recovered.size(); ++a)
      r.recovered[a] = r.solution.x(static_cast<Eigen::Index>(layout.variable_slot(a)));
  r.norm_value = r.solution.objective;
  if (truth) {
    r.rel_error = relative_error(r.recovered, *truth);
    r.success = r.solution.is_optimal() && *r.rel_error < kRecoveryTolerance;
  }
  return r;
}

RecoveryResult recover(const MeasurementEnsemble& ensemble, PNorm p, int k, const SolverSettings& settings,
                       const Tensor* truth) {
  return recover(norm_layout(ensemble.shape, p, k), ensemble.measurements, settings, truth);
}

std::string to_string(SosVerdict v) {
  switch (v) {
    case SosVerdict::feasible: return "feasible";
    case SosVerdict::infeasible: return "infeasible";
    case SosVerdict::undecided: return "undecided";
  }
  return "unknown";
}

SosCertificate certify_sos(const SosSystem& system, const SolverSettings& settings) {
  const ConicProblem prob = assemble_sos_program(system, false);
  SosCertificate cert;
  cert.basis = system.basis;
  SolverSettings s = settings;
  // a witness must match coefficients to kWitnessTolerance; tighten once if
  // the first optimal point is too loose
  for (int attempt = 0; attempt < 2; ++attempt) {
    cert.solution = solve(prob, s);
    if (cert.solution.status == SolveStatus::infeasible) {
      cert.verdict = SosVerdict::infeasible;
      return cert;
    }
    if (!cert.solution.is_optimal()) break;
    cert.gram = cert.solution.slack_psd.front();
    cert.coefficient_error = sos_residual(system, cert.gram);
    if (cert.coefficient_error <= kWitnessTolerance) {
      cert.verdict = SosVerdict::feasible;
      return cert;
    }
    s.eps_primal = std::min(s.eps_primal, 1e-9);
    s.eps_dual = std::min(s.eps_dual, 1e-9);
    s.eps_gap = std::min(s.eps_gap, 1e-9);
  }
  cert.verdict = SosVerdict::undecided;
  return cert;
}

SosCertificate certify_sos(const Polynomial& f, const Shape& shape, PNorm p, int k,
                           const SolverSettings& settings) {
  GroebnerBasis g = build_groebner(IdealSpec::for_norm(shape, p));
  MomentLayout layout = build_moment_layout(g, k);
  return certify_sos(build_sos_system(layout, g, f), settings);
}

}  // namespace thetanorm

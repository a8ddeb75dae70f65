#include "cli.hpp"

#include "thetanorm/experiment.hpp"
#include "thetanorm/groebner.hpp"
#include "thetanorm/gwidth.hpp"
#include "thetanorm/parallel.hpp"
#include "thetanorm/random.hpp"
#include "thetanorm/recovery.hpp"
#include "thetanorm/svg.hpp"
#include "thetanorm/table.hpp"
#include "thetanorm/tensor_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <map>
#include <ostream>

namespace thetanorm::cli {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

Shape single_shape(const CliConfig& cfg) {
  if (cfg.shapes.size() != 1) throw std::invalid_argument("--shape must be given exactly once");
  return Shape::parse(cfg.shapes.front());
}

PNorm single_norm(const CliConfig& cfg) {
  if (cfg.norms.size() != 1) throw std::invalid_argument("--p takes a single value for this subcommand");
  return PNorm::parse(cfg.norms.front());
}

void emit(const CliConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output_path.empty())
    out << text;
  else
    write_text_file(cfg.output_path, text);
}

int cmd_groebner(const CliConfig& cfg, std::ostream& out) {
  const Shape shape = single_shape(cfg);
  const std::string& p = cfg.norms.front();
  IdealSpec spec = p == "rank1" ? IdealSpec::rank_one(shape) : IdealSpec::for_norm(shape, PNorm::parse(p));
  GroebnerBasis g = build_groebner(spec);
  out << "# " << spec.name() << " on " << shape.to_string() << ": " << g.size() << " generators\n";
  for (std::size_t i = 0; i < g.size(); ++i) out << format_polynomial(g[i], shape) << "\n";
  if (!cfg.check_buchberger) return kOk;
  const bool ok = buchberger_check(g) && is_reduced(g);
  out << "buchberger: " << (ok ? "ok" : "FAILED") << "\n";
  return ok ? kOk : kComputationFailed;
}

int cmd_norm(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.tensor_path.empty()) throw std::invalid_argument("norm needs --tensor");
  const Tensor x = read_tensor_file(cfg.tensor_path);
  const PNorm p = single_norm(cfg);
  NormResult r = evaluate_theta_norm(norm_layout(x.shape(), p, cfg.k), x, cfg.solver_settings());
  if (!r.solution.is_optimal()) {
    err << "solver ended with status " << to_string(r.solution.status) << " after " << r.solution.iterations
        << " iterations (last objective " << fmt(r.value) << ")\n";
    return kComputationFailed;
  }
  out << fmt(r.value) << "\n";
  return kOk;
}

int cmd_recover(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  const PNorm p = single_norm(cfg);
  MeasurementEnsemble ensemble;
  std::optional<Tensor> truth;
  if (!cfg.measurements_path.empty()) {
    ensemble = parse_measurements(read_text_file(cfg.measurements_path));
    if (!cfg.truth_path.empty()) truth = read_tensor_file(cfg.truth_path);
  } else {
    ExperimentConfig ecfg;
    ecfg.shape = single_shape(cfg);
    ecfg.rank = cfg.rank;
    ecfg.kind = parse_tensor_kind(cfg.kind);
    ecfg.seed = cfg.seed;
    if (cfg.m == 0) throw std::invalid_argument("recover without --measurements needs --m");
    truth = experiment_truth(ecfg, 0);
    ensemble = gaussian_ensemble(*truth, cfg.m, derive_seed(cfg.seed, 2, 0));
  }
  if (ensemble.size() == 0) throw std::invalid_argument("measurement set is empty");
  RecoveryResult r = recover(ensemble, p, cfg.k, cfg.solver_settings(), truth ? &*truth : nullptr);
  out << "status " << to_string(r.solution.status) << "\n";
  out << "iterations " << r.solution.iterations << "\n";
  out << "norm_value " << fmt(r.norm_value) << "\n";
  if (r.rel_error) {
    out << "rel_error " << fmt(*r.rel_error) << "\n";
    out << "success " << (r.success ? 1 : 0) << "\n";
  }
  if (!cfg.output_path.empty()) write_tensor_file(cfg.output_path, r.recovered);
  if (!r.solution.is_optimal()) {
    err << "solver ended with status " << to_string(r.solution.status) << "\n";
    return kComputationFailed;
  }
  return kOk;
}

int cmd_certify(const CliConfig& cfg, std::ostream& out) {
  const Shape shape = single_shape(cfg);
  const PNorm p = single_norm(cfg);
  std::string text = cfg.polynomial;
  if (!cfg.polynomial_path.empty()) text = read_text_file(cfg.polynomial_path);
  if (text.empty()) throw std::invalid_argument("certify needs --polynomial or --polynomial-file");
  const Polynomial f = parse_polynomial(text, shape);
  SosCertificate cert = certify_sos(f, shape, p, cfg.k, cfg.solver_settings());
  out << to_string(cert.verdict) << "\n";
  if (cert.verdict == SosVerdict::feasible) out << "coefficient_error " << fmt(cert.coefficient_error) << "\n";
  if (!cfg.witness_path.empty() && cert.verdict == SosVerdict::feasible) {
    nlohmann::json doc;
    doc["polynomial"] = format_polynomial(f, shape);
    doc["basis"] = nlohmann::json::array();
    for (const auto& m : cert.basis.monomials) doc["basis"].push_back(format_monomial(m, shape));
    doc["gram"] = nlohmann::json::array();
    for (Eigen::Index i = 0; i < cert.gram.rows(); ++i) {
      std::vector<double> row(static_cast<std::size_t>(cert.gram.cols()));
      for (Eigen::Index j = 0; j < cert.gram.cols(); ++j) row[static_cast<std::size_t>(j)] = cert.gram(i, j);
      doc["gram"].push_back(row);
    }
    doc["coefficient_error"] = cert.coefficient_error;
    write_text_file(cfg.witness_path, doc.dump(1) + "\n");
  }
  return cert.verdict == SosVerdict::undecided ? kComputationFailed : kOk;
}

int cmd_experiment(const CliConfig& cfg, std::ostream& out) {
  ExperimentConfig ecfg;
  ecfg.shape = single_shape(cfg);
  ecfg.rank = cfg.rank;
  ecfg.kind = parse_tensor_kind(cfg.kind);
  for (const auto& p : cfg.norms) ecfg.norms.push_back(PNorm::parse(p));
  ecfg.k = cfg.k;
  if (cfg.mode == "sweep")
    ecfg.mode = ExperimentMode::sweep;
  else if (cfg.mode == "search")
    ecfg.mode = ExperimentMode::search;
  else
    throw std::invalid_argument("--mode must be sweep or search");
  ecfg.m_min = cfg.m_min;
  ecfg.m_max = cfg.m_max;
  ecfg.m_step = cfg.m_step;
  ecfg.trials = cfg.trials;
  ecfg.seed = cfg.seed;
  ecfg.threads = cfg.thread_count();
  ecfg.solver = cfg.solver_settings();
  ExperimentResult result = run_recovery_experiment(ecfg);
  emit(cfg, format_csv(experiment_table(result)), out);
  if (!cfg.output_path.empty() && ecfg.mode == ExperimentMode::search)
    for (const auto& mm : result.minimal)
      out << "trial " << mm.trial << " p " << mm.p.to_string() << " minimal_m "
          << (mm.m ? std::to_string(*mm.m) : std::string("none")) << "\n";

  if (!cfg.svg_path.empty()) {
    std::vector<PlotSeries> series;
    for (const auto& p : ecfg.norms) {
      PlotSeries s;
      s.label = "p = " + p.to_string();
      if (ecfg.mode == ExperimentMode::sweep) {
        // success rate per m
        std::map<std::size_t, std::pair<int, int>> rate;
        for (const auto& row : result.rows)
          if (row.p == p) {
            rate[row.m].first += row.success;
            rate[row.m].second += 1;
          }
        for (const auto& [m, c] : rate) {
          s.x.push_back(static_cast<double>(m));
          s.y.push_back(static_cast<double>(c.first) / c.second);
        }
      } else {
        // fraction of trials whose minimal m is at most m
        std::vector<std::size_t> mins;
        for (const auto& mm : result.minimal)
          if (mm.p == p && mm.m) mins.push_back(*mm.m);
        std::sort(mins.begin(), mins.end());
        for (std::size_t i = 0; i < mins.size(); ++i) {
          s.x.push_back(static_cast<double>(mins[i]));
          s.y.push_back(static_cast<double>(i + 1) / ecfg.trials);
        }
      }
      series.push_back(std::move(s));
    }
    write_text_file(cfg.svg_path, line_plot_svg(series, "recovery on " + ecfg.shape.to_string(),
                                                "measurements m", "fraction recovered"));
  }
  return kOk;
}

int cmd_gwidth(const CliConfig& cfg, std::ostream& out) {
  if (cfg.shapes.empty()) throw std::invalid_argument("gwidth needs at least one --shape");
  std::vector<WidthEstimate> estimates;
  for (const auto& text : cfg.shapes)
    estimates.push_back(
        estimate_width_bound(Shape::parse(text), cfg.samples, cfg.seed, cfg.solver_settings(), cfg.thread_count()));
  emit(cfg, format_csv(width_table(estimates)), out);
  if (!cfg.output_path.empty())
    for (const auto& e : estimates)
      out << e.shape.to_string() << " mean_gamma_sq " << fmt(e.mean_gamma_sq) << " stderr "
          << fmt(e.stderr_gamma_sq) << " bound " << fmt(e.bound_mean) << " undecided " << e.undecided << "\n";
  if (!cfg.svg_path.empty()) {
    PlotSeries s{"mean gamma^2", {}, {}};
    for (const auto& e : estimates) {
      s.x.push_back(static_cast<double>(e.shape.max_dim()));
      s.y.push_back(e.mean_gamma_sq);
    }
    write_text_file(cfg.svg_path, line_plot_svg({s}, "normal-cone gauge", "n", "mean gamma^2"));
  }
  return kOk;
}

}  // namespace

void CliConfig::validate() const {
  if (k < 1) throw std::invalid_argument("--k must be at least 1");
  if (rank < 1) throw std::invalid_argument("--rank must be at least 1");
  if (trials < 0) throw std::invalid_argument("--trials must be nonnegative");
  if (samples < 1) throw std::invalid_argument("--samples must be at least 1");
  if (threads < 0) throw std::invalid_argument("--threads must be nonnegative");
  if (norms.empty()) throw std::invalid_argument("--p needs a value");
  for (const auto& p : norms) {
    if (subcommand == "groebner" && p == "rank1") continue;
    const PNorm parsed = PNorm::parse(p);
    if (!parsed.is_supported()) IdealSpec::for_norm(Shape({2, 2}), parsed);  // throws UnsupportedNorm
  }
  for (const auto& s : shapes) Shape::parse(s);
  if (max_iterations && *max_iterations < 1) throw std::invalid_argument("--max-iters must be positive");
  if (eps && !(*eps > 0)) throw std::invalid_argument("--eps must be positive");
  parse_tensor_kind(kind);
}

SolverSettings CliConfig::solver_settings() const {
  SolverSettings s;
  if (max_iterations) s.max_iterations = *max_iterations;
  if (eps) s.eps_primal = s.eps_dual = s.eps_gap = *eps;
  return s;
}

int CliConfig::thread_count() const { return threads == 0 ? default_thread_count() : threads; }

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  CLI::App app{"Theta-body relaxations of tensor nuclear p-norms"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto add_shape = [&](CLI::App* sub, bool many) {
    auto* o = sub->add_option("--shape", cfg.shapes, many ? "Tensor shape, e.g. 3,3,3 (repeatable)" : "Tensor shape, e.g. 3,3,3");
    if (!many) o->expected(1);
    return o;
  };
  auto add_p = [&](CLI::App* sub, bool many) {
    auto* o = sub->add_option("--p", cfg.norms, many ? "Norm exponents: 1, even, or inf (comma separated)" : "Norm exponent: 1, even, or inf");
    if (many) o->delimiter(','); else o->expected(1);
    return o;
  };
  auto add_solver = [&](CLI::App* sub) {
    sub->add_option("--max-iters", cfg.max_iterations, "Solver iteration budget");
    sub->add_option("--eps", cfg.eps, "Solver tolerance for primal, dual and gap residuals");
  };
  auto add_k = [&](CLI::App* sub) { sub->add_option("--k", cfg.k, "Theta-body level (default 1)"); };

  auto* groebner = app.add_subcommand("groebner", "Print the reduced Groebner basis");
  add_shape(groebner, false)->required();
  groebner->add_option("--p", cfg.norms, "1, even p, inf, or rank1")->expected(1)->required();
  groebner->add_flag("--check-buchberger", cfg.check_buchberger, "Verify the Buchberger criterion");

  auto* norm = app.add_subcommand("norm", "Theta-k norm of a tensor file");
  norm->add_option("--tensor", cfg.tensor_path, "Tensor JSON file")->required();
  add_p(norm, false)->required();
  add_k(norm);
  add_solver(norm);

  auto* rec = app.add_subcommand("recover", "Recover a tensor from linear measurements");
  rec->add_option("--measurements", cfg.measurements_path, "Measurement JSON file");
  rec->add_option("--truth", cfg.truth_path, "Ground-truth tensor file for the error report");
  add_shape(rec, false);
  add_p(rec, false)->required();
  add_k(rec);
  rec->add_option("--rank", cfg.rank, "Rank of the seeded ground truth");
  rec->add_option("--kind", cfg.kind, "gaussian or signed");
  rec->add_option("--m", cfg.m, "Number of seeded Gaussian measurements");
  rec->add_option("--seed", cfg.seed, "Master seed (default 0)");
  rec->add_option("--output", cfg.output_path, "Write the recovered tensor here");
  add_solver(rec);

  auto* cert = app.add_subcommand("certify", "Decide k-sos membership modulo the ideal");
  add_shape(cert, false)->required();
  add_p(cert, false)->required();
  add_k(cert);
  cert->add_option("--polynomial", cfg.polynomial, "Polynomial text, e.g. '1 + 0.5*x[1,1]'");
  cert->add_option("--polynomial-file", cfg.polynomial_path, "File holding the polynomial text");
  cert->add_option("--witness", cfg.witness_path, "Write the Gram witness (JSON) here when feasible");
  add_solver(cert);

  auto* exp = app.add_subcommand("experiment", "Batch recovery experiment to CSV");
  add_shape(exp, false)->required();
  add_p(exp, true)->required();
  add_k(exp);
  exp->add_option("--rank", cfg.rank, "Rank of the ground truth");
  exp->add_option("--kind", cfg.kind, "gaussian or signed");
  exp->add_option("--mode", cfg.mode, "sweep or search");
  exp->add_option("--m-min", cfg.m_min, "Smallest m (search: first probe)");
  exp->add_option("--m-max", cfg.m_max, "Largest m (default N)");
  exp->add_option("--m-step", cfg.m_step, "Sweep step");
  exp->add_option("--trials", cfg.trials, "Number of trials");
  exp->add_option("--seed", cfg.seed, "Master seed (default 0)");
  exp->add_option("--threads", cfg.threads, "Worker threads (default: logical cores)");
  exp->add_option("--output", cfg.output_path, "CSV path (default: standard output)");
  exp->add_option("--svg", cfg.svg_path, "Success-curve SVG path");
  add_solver(exp);

  auto* gw = app.add_subcommand("gwidth", "Gaussian-width bound estimate to CSV");
  add_shape(gw, true)->required();
  gw->add_option("--samples", cfg.samples, "Samples per shape (default 50)");
  gw->add_option("--seed", cfg.seed, "Master seed (default 0)");
  gw->add_option("--threads", cfg.threads, "Worker threads (default: logical cores)");
  gw->add_option("--output", cfg.output_path, "CSV path (default: standard output)");
  gw->add_option("--svg", cfg.svg_path, "Trend SVG path");
  add_solver(gw);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  for (auto* sub : app.get_subcommands()) cfg.subcommand = sub->get_name();

  try {
    cfg.validate();
    if (cfg.subcommand == "groebner") return cmd_groebner(cfg, out);
    if (cfg.subcommand == "norm") return cmd_norm(cfg, out, err);
    if (cfg.subcommand == "recover") return cmd_recover(cfg, out, err);
    if (cfg.subcommand == "certify") return cmd_certify(cfg, out);
    if (cfg.subcommand == "experiment") return cmd_experiment(cfg, out);
    if (cfg.subcommand == "gwidth") return cmd_gwidth(cfg, out);
    err << "error: unknown subcommand\n";
    return kUsageError;
  } catch (const SolverFailure& e) {
    err << "error: " << e.what() << "\n";
    return kComputationFailed;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kComputationFailed;
  }
}

}  // namespace thetanorm::cli

#include "stratcv/experiments.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "stratcv/csv.hpp"
#include "stratcv/stats.hpp"

namespace stratcv {

void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min(std::max<std::size_t>(threads, 1), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;
  auto work = [&] {
    while (!failed.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  pool.clear();
  if (error) std::rethrow_exception(error);
}

GenerativeModel reference_model(const ExperimentConfig& cfg) {
  Rng rng = Rng::derive(cfg.master_seed, "sigma");
  CovarianceSpec spec{cfg.eigenvalues, build_orthogonal(9, rng)};
  return GenerativeModel{build_covariance(spec), cfg.mu, cfg.outcome};
}

Simulation simulate(const GenerativeModel& model, const ExperimentConfig& cfg, Rng& rng) {
  Simulation sim;
  const std::vector<Record> records = generate_records(model, cfg.n_gen, rng);
  sim.original = assign_hospitals(records, cfg.n_h, rng);
  sim.unbiased_folds = random_partition(sim.original, cfg.k, rng);
  sim.duplicated = inject_duplicates(sim.original, cfg.n_dup, rng);
  return sim;
}

namespace {

std::string stratified_name(std::size_t covariate) {
  return "stratified_x" + std::to_string(covariate);
}

}  // namespace

LearningCurves exp_learning_curves(const ExperimentConfig& config, const RunOptions& opts) {
  const ExperimentConfig cfg = config.scaled();
  cfg.validate();
  const GenerativeModel model = reference_model(cfg);

  LearningCurves lc;
  Rng oracle_rng = Rng::derive(cfg.master_seed, "oracle");
  lc.optimal_accuracy = optimal_accuracy(model.covariance, model.mu, model.params, cfg.n_mc, oracle_rng);

  Rng rng = Rng::derive(cfg.master_seed, "fig2");
  const Simulation sim = simulate(model, cfg, rng);
  const FoldAssignment random_folds = random_partition(sim.duplicated, cfg.k, rng, opts.warn);
  const FoldAssignment strat_folds = stratified_partition(
      sim.duplicated, compute_thresholds(sim.duplicated, cfg.fig2_covariate, cfg.k));

  lc.results.resize(3);
  lc.results[0].first = "unbiased";
  lc.results[1].first = "random";
  lc.results[2].first = stratified_name(cfg.fig2_covariate);
  parallel_for(3, opts.threads, [&](std::size_t i) {
    switch (i) {
      case 0: lc.results[0].second = run_cv(sim.original, sim.unbiased_folds, cfg.train, opts.warn); break;
      case 1: lc.results[1].second = run_cv(sim.duplicated, random_folds, cfg.train, opts.warn); break;
      default: lc.results[2].second = run_cv(sim.duplicated, strat_folds, cfg.train, opts.warn); break;
    }
  });

  for (const auto& [name, res] : lc.results) {
    for (std::size_t r = 0; r < res.train_curve.size(); ++r) {
      lc.rows.push_back({r + 1, name, "train", res.train_curve[r]});
    }
    for (std::size_t r = 0; r < res.valid_curve.size(); ++r) {
      lc.rows.push_back({r + 1, name, "valid", res.valid_curve[r]});
    }
  }
  return lc;
}

std::string learning_curves_csv(const LearningCurves& lc) {
  csv::Writer w({"iteration", "strategy", "phase", "accuracy"});
  for (const auto& row : lc.rows) {
    w.field(row.iteration).field(row.strategy).field(row.phase).field(row.accuracy);
    w.end_row();
  }
  w.field(std::size_t{0}).field(std::string_view("optimal")).field(std::string_view("oracle"));
  w.field(lc.optimal_accuracy);
  w.end_row();
  return w.str();
}

std::string learning_curves_per_fold_csv(const LearningCurves& lc) {
  csv::Writer w({"strategy", "fold", "iteration", "phase", "accuracy"});
  for (const auto& [name, res] : lc.results) {
    for (std::size_t f = 0; f < res.k; ++f) {
      for (std::size_t r = 0; r < res.fold_train_curves[f].size(); ++r) {
        w.field(name).field(f).field(r + 1).field(std::string_view("train"));
        w.field(res.fold_train_curves[f][r]);
        w.end_row();
      }
      for (std::size_t r = 0; r < res.fold_valid_curves[f].size(); ++r) {
        w.field(name).field(f).field(r + 1).field(std::string_view("valid"));
        w.field(res.fold_valid_curves[f][r]);
        w.end_row();
      }
    }
  }
  return w.str();
}

std::vector<BiasRow> exp_bias_distribution(const ExperimentConfig& config, const RunOptions& opts) {
  const ExperimentConfig cfg = config.scaled();
  cfg.validate();
  const GenerativeModel model = reference_model(cfg);
  constexpr std::size_t kStrategies = 2 + kNumCovariates;

  std::vector<BiasRow> rows(cfg.n_sims * kStrategies);
  parallel_for(cfg.n_sims, opts.threads, [&](std::size_t s) {
    Rng rng = Rng::derive(cfg.master_seed, "sim", s);
    const Simulation sim = simulate(model, cfg, rng);
    const FoldAssignment random_folds = random_partition(sim.duplicated, cfg.k, rng, opts.warn);

    BiasRow* out = rows.data() + s * kStrategies;
    out[0] = {s, "unbiased", run_cv(sim.original, sim.unbiased_folds, cfg.train, opts.warn).mean_valid};
    out[1] = {s, "random", run_cv(sim.duplicated, random_folds, cfg.train, opts.warn).mean_valid};
    for (std::size_t c = 1; c <= kNumCovariates; ++c) {
      const FoldAssignment folds =
          stratified_partition(sim.duplicated, compute_thresholds(sim.duplicated, c, cfg.k));
      out[1 + c] = {s, stratified_name(c), run_cv(sim.duplicated, folds, cfg.train, opts.warn).mean_valid};
    }
  });
  return rows;
}

std::string bias_distribution_csv(const std::vector<BiasRow>& rows) {
  csv::Writer w({"sim", "strategy", "accuracy"});
  for (const auto& r : rows) {
    w.field(r.sim).field(r.strategy).field(r.accuracy);
    w.end_row();
  }
  return w.str();
}

ImportanceCorrelation exp_importance_correlation(const ExperimentConfig& config,
                                                 const RunOptions& opts) {
  const ExperimentConfig cfg = config.scaled();
  cfg.validate();

  ImportanceCorrelation ic;
  ic.samples.resize(cfg.n_datasets * kNumCovariates);
  parallel_for(cfg.n_datasets, opts.threads, [&](std::size_t d) {
    Rng rng = Rng::derive(cfg.master_seed, "ds", d);
    CovarianceSpec spec;
    for (double& l : spec.eigenvalues) l = rng.uniform(1.0, 3.0);
    spec.orthogonal = build_orthogonal(9, rng);
    GenerativeModel model{build_covariance(spec), cfg.mu, cfg.outcome};
    for (std::size_t i = 0; i < 7; ++i) model.params.a[i] = rng.uniform(-5.0, 5.0);
    if (cfg.redraw_a7) model.params.a[7] = rng.uniform(-5.0, 5.0);

    const Simulation sim = simulate(model, cfg, rng);
    const CvResult unbiased = run_cv(sim.original, sim.unbiased_folds, cfg.train, opts.warn);
    const std::vector<double> importance = unbiased.mean_importance();

    Fig4Sample* out = ic.samples.data() + d * kNumCovariates;
    for (std::size_t c = 1; c <= kNumCovariates; ++c) {
      Fig4Sample& s = out[c - 1];
      s.dataset_id = d;
      s.covariate = c;
      s.importance = importance[c - 1];
      try {
        const FoldAssignment folds =
            stratified_partition(sim.duplicated, compute_thresholds(sim.duplicated, c, cfg.k));
        const double acc = run_cv(sim.duplicated, folds, cfg.train, opts.warn).mean_valid;
        s.accuracy_ratio = acc / unbiased.mean_valid;
      } catch (const DegenerateStratification& e) {
        s.accuracy_ratio = std::nan("");
        s.failure = e.code() + ": " + e.what();
      } catch (const InvalidArgument& e) {
        s.accuracy_ratio = std::nan("");
        s.failure = e.code() + ": " + e.what();
      }
    }
  });
  finish_correlation(ic);
  return ic;
}

void finish_correlation(ImportanceCorrelation& ic) {
  std::vector<double> xs, ys;
  for (const auto& s : ic.samples) {
    if (s.failure) continue;
    xs.push_back(s.importance);
    ys.push_back(s.accuracy_ratio);
  }
  ic.pearson_r.reset();
  ic.error.clear();
  try {
    ic.pearson_r = pearson(xs, ys);
  } catch (const Error& e) {
    ic.error = e.code();
  }
}

std::string importance_correlation_csv(const ImportanceCorrelation& ic) {
  csv::Writer w({"dataset", "covariate", "importance", "accuracy_ratio"});
  for (const auto& s : ic.samples) {
    w.field(s.dataset_id).field(s.covariate).field(s.importance).field(s.accuracy_ratio);
    w.end_row();
  }
  return w.str();
}

std::string importance_summary(const ImportanceCorrelation& ic) {
  if (ic.pearson_r) return "pearson_r=" + csv::format_double(*ic.pearson_r) + "\n";
  return "pearson_r=error:" + ic.error + "\n";
}

}  // namespace stratcv

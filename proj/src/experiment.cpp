#include <voxpose/experiment.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <thread>

#include <voxpose/errors.hpp>
#include <voxpose/rng.hpp>

namespace voxpose {

namespace {

struct PoseSetup {
  Pose gt;
  Pose init;
  Image gt_image;
  std::uint64_t opt_seed = 0;
};

struct Arm {
  std::string label;
  double value = 0;
};

std::vector<Arm> plan_arms(const ExperimentSpec& spec) {
  std::vector<Arm> arms;
  switch (spec.ablation) {
    case AblationAxis::none:
      arms.push_back({"full", spec.optimizer.subsample_fraction});
      break;
    case AblationAxis::subsample:
      for (double f : spec.subsample_fractions) {
        std::ostringstream label;
        label << "subsample-" << f;
        arms.push_back({label.str(), f});
      }
      break;
    case AblationAxis::resolution:
      for (int r : spec.resolutions) {
        arms.push_back({"res-" + std::to_string(r), static_cast<double>(r)});
      }
      break;
  }
  return arms;
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double hi = v[mid];
  if (v.size() % 2 == 0) {
    std::nth_element(v.begin(), v.begin() + mid - 1, v.begin() + mid);
    return 0.5 * (hi + v[mid - 1]);
  }
  return hi;
}

void aggregate_arm(ArmReport& arm, const SuccessCutoffs& cutoffs) {
  std::vector<double> res, tes, runtimes;
  double rot_ok = 0, trans_ok = 0;
  double ms_total = 0;
  std::size_t rows_total = 0;
  std::size_t max_rows = 0;
  for (const PoseRun& run : arm.runs) {
    res.push_back(run.final_re);
    tes.push_back(run.final_te);
    runtimes.push_back(run.runtime_s);
    rot_ok += run.rot_ok ? 1 : 0;
    trans_ok += run.trans_ok ? 1 : 0;
    for (const TraceRow& row : run.trace.rows) ms_total += row.ms;
    rows_total += run.trace.rows.size();
    max_rows = std::max(max_rows, run.trace.rows.size());
  }
  const double n = static_cast<double>(arm.runs.size());
  arm.pct_rot_ok = n > 0 ? rot_ok / n : 0;
  arm.pct_trans_ok = n > 0 ? trans_ok / n : 0;
  arm.avg_re = mean(res);
  arm.avg_te = mean(tes);
  arm.avg_runtime_s = mean(runtimes);
  arm.avg_epoch_ms = rows_total > 0 ? ms_total / static_cast<double>(rows_total) : 0;

  arm.curves.clear();
  arm.curves.reserve(max_rows);
  for (std::size_t e = 0; e < max_rows; ++e) {
    CurvePoint pt;
    pt.epoch = static_cast<int>(e) + 1;
    std::vector<double> re_now, te_now;
    double re_fail = 0, te_fail = 0;
    for (const PoseRun& run : arm.runs) {
      if (run.trace.rows.empty()) continue;
      const std::size_t idx = std::min(e, run.trace.rows.size() - 1);
      const TraceRow& row = run.trace.rows[idx];
      re_now.push_back(row.rotation_err_deg);
      te_now.push_back(row.translation_err);
      if (row.rotation_err_deg >= cutoffs.rotation_deg) re_fail += 1;
      if (row.translation_err >= cutoffs.translation) te_fail += 1;
    }
    if (re_now.empty()) break;
    const double m = static_cast<double>(re_now.size());
    pt.avg_re = mean(re_now);
    pt.med_re = median(re_now);
    pt.fail_re = re_fail / m;
    pt.avg_te = mean(te_now);
    pt.med_te = median(te_now);
    pt.fail_te = te_fail / m;
    arm.curves.push_back(pt);
  }
}

const char* stop_name(StopReason stop) {
  switch (stop) {
    case StopReason::converged:
      return "converged";
    case StopReason::epoch_limit:
      return "epoch_limit";
    case StopReason::nonfinite:
      return "nonfinite";
  }
  return "unknown";
}

void write_runs_rows(std::ostream& f, const ArmReport& arm) {
  for (const PoseRun& run : arm.runs) {
    f << arm.label << ',' << run.index << ',' << run.seed << ',' << run.init_re
      << ',' << run.init_te << ',' << run.final_re << ',' << run.final_te << ','
      << run.final_photo_err << ',' << run.epochs << ',' << stop_name(run.stop)
      << ',' << run.runtime_s << ',' << (run.rot_ok ? 1 : 0) << ','
      << (run.trans_ok ? 1 : 0) << '\n';
  }
}

}  // namespace

ExperimentReport run_experiment(const ExperimentSpec& spec,
                                const VoxelGrid& reference,
                                const std::filesystem::path& out_dir,
                                const Logger& log) {
  if (spec.poses < 1) throw BadSpec("run_experiment: poses must be >= 1");
  if (spec.ablation == AblationAxis::subsample) {
    for (double f : spec.subsample_fractions) {
      if (!(f > 0.0 && f <= 1.0)) {
        throw BadSpec("run_experiment: subsample fractions must be in (0, 1]");
      }
    }
  }
  if (spec.ablation == AblationAxis::resolution) {
    for (int r : spec.resolutions) {
      if (r < 2) throw BadSpec("run_experiment: resolutions must be >= 2");
    }
  }

  const bool flush = !out_dir.empty();
  std::ofstream runs_csv;
  if (flush) {
    std::filesystem::create_directories(out_dir / "traces");
    runs_csv.open(out_dir / "runs.csv");
    if (!runs_csv) throw IoError("run_experiment: cannot write runs.csv");
    runs_csv << "arm,pose,seed,init_re,init_te,final_re,final_te,"
                "final_photo_err,epochs,stop,runtime_s,rot_ok,trans_ok\n";
    runs_csv << std::setprecision(10);
  }

  std::vector<PoseSetup> setups(spec.poses);
  for (int k = 0; k < spec.poses; ++k) {
    std::mt19937_64 view_rng(derive_seed(spec.master_seed, 0, k));
    setups[k].gt = random_view_pose(spec.camera_radius, view_rng);
    setups[k].init =
        perturb_pose(setups[k].gt, spec.perturb, derive_seed(spec.master_seed, 1, k));
    setups[k].gt_image =
        render_image(reference, setups[k].gt, spec.intrinsics, spec.render);
    setups[k].opt_seed = derive_seed(spec.master_seed, 2, k);
  }

  ExperimentReport report;
  for (const Arm& plan : plan_arms(spec)) {
    ArmReport arm;
    arm.label = plan.label;
    arm.value = plan.value;
    arm.runs.resize(spec.poses);

    std::optional<VoxelGrid> resampled;
    const VoxelGrid* grid = &reference;
    OptimizerConfig opt = spec.optimizer;
    if (spec.ablation == AblationAxis::subsample) {
      opt.subsample_fraction = plan.value;
    } else if (spec.ablation == AblationAxis::resolution) {
      const int res = static_cast<int>(plan.value);
      if (res != reference.resolution()) {
        resampled = resample_grid(reference, res);
        grid = &*resampled;
      }
    }

    const auto run_pose = [&](int k) {
      const PoseSetup& setup = setups[k];
      OptimizerConfig opt_k = opt;
      opt_k.seed = setup.opt_seed;
      const auto t0 = std::chrono::steady_clock::now();
      EstimateResult est = estimate_pose(*grid, setup.gt_image, spec.intrinsics,
                                         setup.init, opt_k, spec.render, setup.gt);
      const auto t1 = std::chrono::steady_clock::now();

      PoseRun run;
      run.index = k;
      run.seed = setup.opt_seed;
      run.gt = setup.gt;
      run.init = setup.init;
      run.final = est.pose;
      run.init_re = rotation_error_deg(setup.init.rotation, setup.gt.rotation);
      run.init_te =
          translation_error(setup.init.translation, setup.gt.translation);
      run.final_re = rotation_error_deg(est.pose.rotation, setup.gt.rotation);
      run.final_te =
          translation_error(est.pose.translation, setup.gt.translation);
      run.final_photo_err =
          est.trace.rows.empty() ? 0.0 : est.trace.rows.back().photo_err;
      run.epochs = static_cast<int>(est.trace.rows.size());
      run.stop = est.trace.stop;
      run.runtime_s = std::chrono::duration<double>(t1 - t0).count();
      run.rot_ok = run.final_re < spec.cutoffs.rotation_deg;
      run.trans_ok = run.final_te < spec.cutoffs.translation;
      run.trace = std::move(est.trace);
      arm.runs[k] = std::move(run);

      if (log) {
        std::ostringstream msg;
        msg << arm.label << " pose " << k << ": RE "
            << arm.runs[k].final_re << " deg, TE " << arm.runs[k].final_te
            << ", " << arm.runs[k].epochs << " epochs ("
            << stop_name(arm.runs[k].stop) << ")";
        log(msg.str());
      }
    };

    const int jobs = std::max(1, spec.jobs);
    if (jobs == 1 || spec.poses == 1) {
      for (int k = 0; k < spec.poses; ++k) run_pose(k);
    } else {
      std::atomic<int> next{0};
      std::vector<std::thread> workers;
      const int n_workers = std::min(jobs, spec.poses);
      workers.reserve(n_workers);
      for (int w = 0; w < n_workers; ++w) {
        workers.emplace_back([&] {
          for (int k = next.fetch_add(1); k < spec.poses; k = next.fetch_add(1)) {
            run_pose(k);
          }
        });
      }
      for (std::thread& t : workers) t.join();
    }

    aggregate_arm(arm, spec.cutoffs);
    if (flush) {
      write_runs_rows(runs_csv, arm);
      runs_csv.flush();
      for (const PoseRun& run : arm.runs) {
        write_trace_csv(out_dir / "traces" /
                            (arm.label + "-pose" + std::to_string(run.index) + ".csv"),
                        run.trace);
      }
    }
    report.arms.push_back(std::move(arm));
  }

  if (flush) {
    write_summary_csv(out_dir / "summary.csv", report);
    write_curves_csv(out_dir / "curves.csv", report);
  }
  return report;
}

ExperimentReport run_experiment(const ExperimentSpec& spec,
                                const std::filesystem::path& out_dir,
                                const Logger& log) {
  const VoxelGrid grid = build_scene(spec.scene);
  return run_experiment(spec, grid, out_dir, log);
}

void write_summary_csv(const std::filesystem::path& path,
                       const ExperimentReport& report) {
  std::ofstream f(path);
  if (!f) throw IoError("write_summary_csv: cannot open " + path.string());
  f << std::setprecision(10);
  f << "arm,value,pct_re_below_cutoff,pct_te_below_cutoff,avg_re_deg,"
       "avg_te_units,avg_runtime_s,avg_epoch_ms\n";
  for (const ArmReport& arm : report.arms) {
    f << arm.label << ',' << arm.value << ',' << arm.pct_rot_ok << ','
      << arm.pct_trans_ok << ',' << arm.avg_re << ',' << arm.avg_te << ','
      << arm.avg_runtime_s << ',' << arm.avg_epoch_ms << '\n';
  }
  if (!f) throw IoError("write_summary_csv: write failed");
}

void write_runs_csv(const std::filesystem::path& path,
                    const ExperimentReport& report) {
  std::ofstream f(path);
  if (!f) throw IoError("write_runs_csv: cannot open " + path.string());
  f << std::setprecision(10);
  f << "arm,pose,seed,init_re,init_te,final_re,final_te,final_photo_err,"
       "epochs,stop,runtime_s,rot_ok,trans_ok\n";
  for (const ArmReport& arm : report.arms) write_runs_rows(f, arm);
  if (!f) throw IoError("write_runs_csv: write failed");
}

void write_curves_csv(const std::filesystem::path& path,
                      const ExperimentReport& report) {
  std::ofstream f(path);
  if (!f) throw IoError("write_curves_csv: cannot open " + path.string());
  f << std::setprecision(10);
  f << "arm,epoch,avg_re,med_re,fail_re,avg_te,med_te,fail_te\n";
  for (const ArmReport& arm : report.arms) {
    for (const CurvePoint& pt : arm.curves) {
      f << arm.label << ',' << pt.epoch << ',' << pt.avg_re << ',' << pt.med_re
        << ',' << pt.fail_re << ',' << pt.avg_te << ',' << pt.med_te << ','
        << pt.fail_te << '\n';
    }
  }
  if (!f) throw IoError("write_curves_csv: write failed");
}

}  // namespace voxpose

#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <thread>

#include "CLI11.hpp"
#include "json_config.hpp"
#include "pun/io.hpp"
#include "pun/metrics.hpp"
#include "pun/parallel.hpp"
#include "pun/phantom.hpp"
#include "pun/training.hpp"
#include "pun/workflows.hpp"

namespace pun::cli {

namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Turns configuration validation failures into usage errors.
template <class F>
void check_usage(F&& f) {
  try {
    f();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

const std::vector<std::string> kSubcommands{"simulate", "train", "prune-init", "prune-after", "eval"};
const std::vector<std::string> kGlobalKeys{"serial", "threads"};

// ---------------------------------------------------------------------------
// Manifest helpers

Json unroll_to_json(const UnrollConfig& u) {
  Json j;
  j["num_unrolls"] = u.num_unrolls;
  j["lambda"] = u.dc.lambda;
  j["cg_tol"] = u.dc.tol;
  j["cg_max_iter"] = u.dc.max_iter;
  return j;
}

UnrollConfig unroll_from_json(const Json& j) {
  UnrollConfig u;
  u.num_unrolls = j.at("num_unrolls").get<int>();
  u.dc.lambda = j.at("lambda").get<double>();
  u.dc.tol = j.at("cg_tol").get<double>();
  u.dc.max_iter = j.at("cg_max_iter").get<int>();
  u.validate();
  return u;
}

Json optimizer_to_json(const OptimizerConfig& o) {
  Json j;
  j["algorithm"] = "adam";
  j["learning_rate"] = o.learning_rate;
  j["beta1"] = o.beta1;
  j["beta2"] = o.beta2;
  j["epsilon"] = o.epsilon;
  j["batch_size"] = o.batch_size;
  j["epochs"] = o.epochs;
  j["shuffle_seed"] = o.seed;
  return j;
}

Json checkpoint_manifest(Method method, const WorkflowConfig& cfg, const DatasetConfig& data) {
  Json j;
  j["format"] = "pun-checkpoint";
  j["version"] = 1;
  j["method"] = to_string(method);
  j["init_seed"] = cfg.init_seed;
  j["unroll"] = unroll_to_json(cfg.unroll);
  j["optimizer"] = optimizer_to_json(cfg.opt);
  j["train_data"] = dataset_manifest(data, {})["config"];
  j["conventions"] = {
      {"sparsity_level", "fraction of weights kept"},
      {"loss", "mean over samples and pixels of |x - target|^2, target = ground truth / scale"},
      {"psnr", kPsnrConvention}};
  return j;
}

Json training_summary(const std::vector<EpochRecord>& epochs, const DenoiserParams& params,
                      const std::optional<BinaryMask>& mask) {
  Json j;
  j["epochs_run"] = epochs.size();
  if (!epochs.empty()) j["final_train_loss"] = epochs.back().train_loss;
  j["nonzero_params"] = count_nonzero_effective(params, mask ? &*mask : nullptr);
  j["num_params"] = params.size();
  return j;
}

// ---------------------------------------------------------------------------
// CSV output

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

std::string report_csv(const std::vector<TrainReport>& rounds, bool with_round) {
  std::string s = with_round ? "round," : "";
  s += "epoch,train_loss,val_psnr_db,active_params\n";
  for (std::size_t r = 0; r < rounds.size(); ++r) {
    for (const auto& e : rounds[r].epochs) {
      if (with_round) s += std::to_string(r) + ",";
      s += std::to_string(e.epoch) + "," + format_double(e.train_loss) + "," +
           format_double(e.val_psnr_db) + "," + std::to_string(e.active_params) + "\n";
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Shared flag groups

struct DataPaths {
  std::string data;
  std::string val;
  std::string out;
};

struct TrainingFlags {
  WorkflowConfig cfg;
  std::uint64_t seed = 0;

  void finish() {
    cfg.init_seed = seed;
    cfg.opt.seed = seed;
    cfg.opt.validate();
    cfg.unroll.validate();
  }
};

void add_data_flags(CLI::App* sub, DataPaths& paths) {
  sub->add_option("--data", paths.data, "Training dataset directory")->required();
  sub->add_option("--val", paths.val, "Validation dataset directory (optional)");
  sub->add_option("--out", paths.out, "Output checkpoint directory")->required();
}

void add_optimizer_flags(CLI::App* sub, TrainingFlags& t, const std::string& epochs_flag) {
  sub->add_option(epochs_flag, t.cfg.opt.epochs, "Training epochs")->capture_default_str();
  sub->add_option("--lr", t.cfg.opt.learning_rate, "Adam learning rate")->capture_default_str();
  sub->add_option("--batch-size", t.cfg.opt.batch_size, "Samples per batch")->capture_default_str();
  sub->add_option("--seed", t.seed, "Initialisation and shuffling seed")->capture_default_str();
}

void add_unroll_flags(CLI::App* sub, TrainingFlags& t) {
  sub->add_option("--unrolls", t.cfg.unroll.num_unrolls, "Unrolled blocks N")->capture_default_str();
  sub->add_option("--lambda", t.cfg.unroll.dc.lambda, "Data-consistency weight")->capture_default_str();
  sub->add_option("--cg-tol", t.cfg.unroll.dc.tol, "CG relative residual tolerance")->capture_default_str();
  sub->add_option("--cg-max-iter", t.cfg.unroll.dc.max_iter, "CG iteration cap")->capture_default_str();
}

struct LoadedData {
  Dataset train;
  std::optional<Dataset> val;
  std::span<const SampleRecord> val_span() const {
    return val ? std::span<const SampleRecord>(val->samples) : std::span<const SampleRecord>();
  }
};

LoadedData load_data(const DataPaths& paths) {
  LoadedData d{load_dataset(paths.data), std::nullopt};
  if (!paths.val.empty()) d.val = load_dataset(paths.val);
  return d;
}

EpochCallback progress(std::ostream& err, const std::string& label) {
  return [&err, label](const EpochRecord& e) {
    char line[160];
    std::snprintf(line, sizeof(line), "[%s] epoch %d  loss %.6g  val %.3f dB  active %zu  %.1fs\n",
                  label.c_str(), e.epoch, e.train_loss, e.val_psnr_db, e.active_params, e.wall_seconds);
    err << line << std::flush;
  };
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  std::string out;
  DatasetConfig cfg;
};

void register_simulate(CLI::App& app, SimulateArgs& a) {
  CLI::App* sub = app.add_subcommand("simulate", "Generate a synthetic multi-coil dataset");
  sub->add_option("--out", a.out, "Output dataset directory")->required();
  sub->add_option("--num", a.cfg.num_samples, "Number of samples")->capture_default_str();
  sub->add_option("--size", a.cfg.image_size, "Image side length (power of two)")->capture_default_str();
  sub->add_option("--coils", a.cfg.num_coils, "Receiver coils")->capture_default_str();
  sub->add_option("--accel", a.cfg.acceleration, "Acceleration factor")->capture_default_str();
  sub->add_option("--acs", a.cfg.acs_width, "Fully sampled centre lines")->capture_default_str();
  sub->add_option("--noise-sigma", a.cfg.noise_sigma, "Complex noise std on sampled k-space")
      ->capture_default_str();
  sub->add_option("--seed", a.cfg.base_seed, "Seed of sample 0 (sample i uses seed + i)")
      ->capture_default_str();
  sub->add_option("--family", a.cfg.family, "Phantom family")
      ->check(CLI::IsMember({"base", "shifted"}))
      ->capture_default_str();
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  check_usage([&] { a.cfg.validate(); });
  const auto samples = build_dataset(a.cfg);
  save_dataset(a.out, a.cfg, samples);
  out << "simulate: wrote " << samples.size() << " samples (" << a.cfg.family << ", "
      << a.cfg.image_size << "x" << a.cfg.image_size << ", " << a.cfg.num_coils << " coils, "
      << format_double(a.cfg.acceleration) << "x) to " << a.out << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
  DataPaths paths;
  TrainingFlags t;
  std::string mode = "dense";
};

void register_train(CLI::App& app, TrainArgs& a) {
  CLI::App* sub = app.add_subcommand("train", "Train a dense network or prune while training");
  add_data_flags(sub, a.paths);
  sub->add_option("--mode", a.mode, "Training mode")
      ->check(CLI::IsMember({"dense", "pun-wt"}))
      ->capture_default_str();
  sub->add_option("--sparsity", a.t.cfg.wt_sparsity, "Target kept fraction for pun-wt")
      ->capture_default_str();
  add_optimizer_flags(sub, a.t, "--epochs");
  add_unroll_flags(sub, a.t);
}

int cmd_train(TrainArgs& a, std::ostream& out, std::ostream& err) {
  check_usage([&] {
    a.t.finish();
    if (a.mode == "pun-wt") pun_wt_schedule(a.t.cfg.opt.epochs, a.t.cfg.wt_sparsity);
  });
  const LoadedData data = load_data(a.paths);
  const Method method = method_from_string(a.mode);
  const WorkflowResult r = method == Method::Dense
                               ? run_dense(data.train.samples, data.val_span(), a.t.cfg, progress(err, a.mode))
                               : run_pun_wt(data.train.samples, data.val_span(), a.t.cfg, progress(err, a.mode));

  Checkpoint ckpt;
  ckpt.params = r.params;
  ckpt.mask = r.mask;
  ckpt.manifest = checkpoint_manifest(method, a.t.cfg, data.train.config);
  if (method == Method::PunWt) {
    Json events = Json::array();
    for (const auto& e : pun_wt_schedule(a.t.cfg.opt.epochs, a.t.cfg.wt_sparsity)) {
      events.push_back({{"epoch", e.epoch}, {"keep_fraction", e.keep_fraction},
                        {"surviving_fraction", e.surviving_fraction}});
    }
    ckpt.manifest["pruning"] = {{"target_sparsity", a.t.cfg.wt_sparsity}, {"schedule", events}};
  }
  ckpt.manifest["result"] = training_summary(r.reports.front().epochs, r.params, r.mask);
  save_checkpoint(a.paths.out, ckpt);
  write_text(fs::path(a.paths.out) / "report.csv", report_csv(r.reports, false));

  out << "train (" << a.mode << "): " << r.reports.front().epochs.size() << " epochs, nonzero params "
      << ckpt.manifest["result"]["nonzero_params"].get<std::size_t>() << "/" << r.params.size();
  if (!r.reports.front().epochs.empty()) {
    out << ", final loss " << format_double(r.reports.front().epochs.back().train_loss);
  }
  out << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// prune-init

struct PruneInitArgs {
  DataPaths paths;
  TrainingFlags t;
};

void register_prune_init(CLI::App& app, PruneInitArgs& a) {
  CLI::App* sub = app.add_subcommand("prune-init", "Learn a sparse mask at initialisation, then train it");
  add_data_flags(sub, a.paths);
  WorkflowConfig& c = a.t.cfg;
  sub->add_option("--sparsity", c.it_sparsity, "Kept fraction of weights")->capture_default_str();
  sub->add_option("--temperature", c.temperature, "Relaxation temperature")->capture_default_str();
  sub->add_option("--kl-weight", c.kl_weight, "KL multiplier (divided by d)")->capture_default_str();
  sub->add_option("--mask-epochs", c.mask_epochs, "Epochs of mask search")->capture_default_str();
  sub->add_option("--mask-lr", c.mask_learning_rate, "Adam learning rate on mask logits")
      ->capture_default_str();
  add_optimizer_flags(sub, a.t, "--train-epochs");
  add_unroll_flags(sub, a.t);
}

int cmd_prune_init(PruneInitArgs& a, std::ostream& out, std::ostream& err) {
  check_usage([&] {
    a.t.finish();
    PruneState::initial(parameter_count(a.t.cfg.arch), a.t.cfg.it_sparsity, a.t.cfg.temperature,
                        a.t.cfg.kl_weight);
    if (a.t.cfg.mask_epochs < 0) throw std::invalid_argument("--mask-epochs must be >= 0");
    a.t.cfg.mask_optimizer().validate();
  });
  const LoadedData data = load_data(a.paths);
  const WorkflowResult r = run_pun_it(data.train.samples, data.val_span(), a.t.cfg, progress(err, "pun-it"));

  Checkpoint ckpt;
  ckpt.params = r.params;
  ckpt.mask = r.mask;
  ckpt.probabilities = r.prune_state->probabilities();
  ckpt.manifest = checkpoint_manifest(Method::PunIt, a.t.cfg, data.train.config);
  ckpt.manifest["pruning"] = {{"target_sparsity", a.t.cfg.it_sparsity},
                              {"budget", r.prune_state->budget},
                              {"target_p0", r.prune_state->target_p0},
                              {"temperature", a.t.cfg.temperature},
                              {"kl_weight", a.t.cfg.kl_weight},
                              {"mask_epochs", a.t.cfg.mask_epochs},
                              {"mask_learning_rate", a.t.cfg.mask_learning_rate},
                              {"mask_objective", r.mask_objective}};
  ckpt.manifest["result"] = training_summary(r.reports.front().epochs, r.params, r.mask);
  save_checkpoint(a.paths.out, ckpt);
  write_text(fs::path(a.paths.out) / "report.csv", report_csv(r.reports, false));

  out << "prune-init: kept " << r.mask->count() << "/" << r.params.size() << " weights";
  if (!r.mask_objective.empty()) {
    out << ", mask objective " << format_double(r.mask_objective.front()) << " -> "
        << format_double(r.mask_objective.back());
  }
  out << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// prune-after

struct PruneAfterArgs {
  DataPaths paths;
  std::string ckpt;
  TrainingFlags t;
};

void register_prune_after(CLI::App& app, PruneAfterArgs& a) {
  CLI::App* sub = app.add_subcommand("prune-after", "Iterative magnitude pruning of a dense checkpoint");
  add_data_flags(sub, a.paths);
  sub->add_option("--ckpt", a.ckpt, "Dense checkpoint directory")->required();
  WorkflowConfig& c = a.t.cfg;
  sub->add_option("--rounds", c.at_rounds, "Prune/retrain rounds")->capture_default_str();
  sub->add_option("--retrain-epochs", c.at_retrain_epochs, "Epochs per retraining round")
      ->capture_default_str();
  sub->add_option("--sparsity", c.at_sparsity, "Final kept fraction of weights")->capture_default_str();
  sub->add_option("--lr", c.opt.learning_rate, "Adam learning rate")->capture_default_str();
  sub->add_option("--batch-size", c.opt.batch_size, "Samples per batch")->capture_default_str();
  sub->add_option("--seed", a.t.seed, "Shuffling seed")->capture_default_str();
}

int cmd_prune_after(PruneAfterArgs& a, std::ostream& out, std::ostream& err) {
  check_usage([&] {
    a.t.finish();
    pun_at_milestones(a.t.cfg.at_rounds, a.t.cfg.at_sparsity);
    if (a.t.cfg.at_retrain_epochs < 0) throw std::invalid_argument("--retrain-epochs must be >= 0");
  });
  const Checkpoint dense = load_checkpoint(a.ckpt);
  if (dense.mask) throw std::runtime_error("prune-after expects a dense checkpoint, got a masked one");
  WorkflowConfig cfg = a.t.cfg;
  cfg.arch = dense.params.arch;
  cfg.unroll = unroll_from_json(dense.manifest.at("unroll"));
  cfg.opt.epochs = cfg.at_retrain_epochs;
  cfg.init_seed = dense.manifest.value("init_seed", std::uint64_t{0});

  const LoadedData data = load_data(a.paths);
  err << "[pun-at] " << cfg.at_rounds << " rounds of " << cfg.at_retrain_epochs << " epochs\n";
  const WorkflowResult r = run_pun_at(data.train.samples, data.val_span(), dense.params, cfg);

  Checkpoint ckpt;
  ckpt.params = r.params;
  ckpt.mask = r.mask;
  ckpt.manifest = checkpoint_manifest(Method::PunAt, cfg, data.train.config);
  ckpt.manifest["pruning"] = {{"target_sparsity", cfg.at_sparsity},
                              {"rounds", cfg.at_rounds},
                              {"retrain_epochs", cfg.at_retrain_epochs},
                              {"milestones", pun_at_milestones(cfg.at_rounds, cfg.at_sparsity)},
                              {"dense_optimizer", dense.manifest.value("optimizer", Json::object())}};
  std::vector<EpochRecord> all;
  for (const auto& rep : r.reports) all.insert(all.end(), rep.epochs.begin(), rep.epochs.end());
  ckpt.manifest["result"] = training_summary(all, r.params, r.mask);
  save_checkpoint(a.paths.out, ckpt);
  write_text(fs::path(a.paths.out) / "report.csv", report_csv(r.reports, true));

  out << "prune-after: kept " << ckpt.manifest["result"]["nonzero_params"].get<std::size_t>() << "/"
      << r.params.size() << " weights after " << cfg.at_rounds << " rounds\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string ckpt;
  std::string data;
  std::string csv;
  std::string dump_images;
  double accel = 4.0;
  double noise_sigma = 0.0;
  std::optional<std::size_t> acs;
  std::uint64_t eval_seed = 0;
  bool zero_filled = false;
};

void register_eval(CLI::App& app, EvalArgs& a) {
  CLI::App* sub = app.add_subcommand("eval", "Evaluate a checkpoint under re-acquired test data");
  sub->add_option("--ckpt", a.ckpt, "Checkpoint directory");
  sub->add_option("--data", a.data, "Test dataset directory")->required();
  sub->add_option("--accel", a.accel, "Evaluation acceleration")->capture_default_str();
  sub->add_option("--noise-sigma", a.noise_sigma, "Evaluation noise std")->capture_default_str();
  sub->add_option("--acs", a.acs, "Centre lines at evaluation (default: as in the dataset)");
  sub->add_option("--eval-seed", a.eval_seed, "Seed mixed into the evaluation masks and noise")
      ->capture_default_str();
  sub->add_option("--csv", a.csv, "Per-sample CSV output")->required();
  sub->add_option("--dump-images", a.dump_images, "Directory for PGM reconstructions");
  sub->add_flag("--zero-filled", a.zero_filled, "Evaluate the zero-filled baseline instead of a checkpoint");
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  check_usage([&] {
    if (a.zero_filled == !a.ckpt.empty()) {
      throw std::invalid_argument("eval needs exactly one of --ckpt and --zero-filled");
    }
    if (!(a.accel >= 1.0)) throw std::invalid_argument("--accel must be >= 1");
    if (!(a.noise_sigma >= 0.0)) throw std::invalid_argument("--noise-sigma must be >= 0");
  });
  const Dataset data = load_dataset(a.data);
  const std::size_t acs = a.acs.value_or(data.config.acs_width);

  std::vector<SampleRecord> test(data.samples.size());
  parallel_for(test.size(), [&](std::size_t i) {
    test[i] = reacquire(data.samples[i], a.accel, acs, a.noise_sigma, a.eval_seed);
  });

  std::optional<Checkpoint> ckpt;
  UnrollConfig unroll;
  std::string method = "zero-filled";
  if (!a.zero_filled) {
    ckpt = load_checkpoint(a.ckpt);
    unroll = unroll_from_json(ckpt->manifest.at("unroll"));
    method = ckpt->manifest.value("method", std::string("unknown"));
  }
  const BinaryMask* mask = ckpt && ckpt->mask ? &*ckpt->mask : nullptr;
  const std::vector<double> scores =
      ckpt ? evaluate_psnr(test, ckpt->params, mask, unroll) : zero_filled_psnr(test);

  std::string csv = std::string("# psnr_convention=") + kPsnrConvention + "\n";
  csv += "sample_id,psnr_db,accel,sigma,family,method\n";
  for (std::size_t i = 0; i < scores.size(); ++i) {
    csv += std::to_string(i) + "," + format_double(scores[i]) + "," + format_double(a.accel) + "," +
           format_double(a.noise_sigma) + "," + data.config.family + "," + method + "\n";
  }
  write_text(a.csv, csv);

  if (!a.dump_images.empty()) {
    const fs::path dir(a.dump_images);
    fs::create_directories(dir);
    std::vector<double> weights;
    if (mask) weights = mask->weights();
    for (std::size_t i = 0; i < test.size(); ++i) {
      const ComplexImage ref = test[i].target();
      const ComplexImage recon = ckpt ? reconstruct(test[i], ckpt->params, weights, unroll)
                                      : apply_adjoint(test[i].op(), test[i].kspace);
      double peak = 0.0;
      for (const auto& v : ref.data()) peak = std::max(peak, std::abs(v));
      char stem[32];
      std::snprintf(stem, sizeof(stem), "sample_%04zu", i);
      write_pgm(dir / (std::string(stem) + "_recon.pgm"), recon, peak);
      write_pgm(dir / (std::string(stem) + "_ref.pgm"), ref, peak);
    }
  }

  const Summary s = summarize(scores);
  char line[200];
  std::snprintf(line, sizeof(line),
                "eval (%s, %s, %gx, sigma %g): %zu samples  mean %.3f  median %.3f  IQR [%.3f, %.3f] dB\n",
                method.c_str(), data.config.family.c_str(), a.accel, a.noise_sigma, s.count, s.mean,
                s.median, s.q1, s.q3);
  out << line;
  return kExitOk;
}

std::string active_subcommand(const std::vector<std::string>& args) {
  for (const auto& a : args)
    if (std::find(kSubcommands.begin(), kSubcommands.end(), a) != kSubcommands.end()) return a;
  return {};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pruning unrolled networks for accelerated MRI reconstruction", "pun"};
  app.require_subcommand(1);
  app.fallthrough();
  app.config_formatter(std::make_shared<JsonConfig>(active_subcommand(args), kGlobalKeys, kSubcommands));
  app.set_config("--config", "", "JSON file with flag values; command-line flags take precedence");

  bool serial = false;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  app.add_flag("--serial", serial, "Single-threaded, bit-reproducible mode");
  app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

  SimulateArgs simulate;
  TrainArgs train_args;
  PruneInitArgs prune_init;
  PruneAfterArgs prune_after;
  EvalArgs eval;
  register_simulate(app, simulate);
  register_train(app, train_args);
  register_prune_init(app, prune_init);
  register_prune_after(app, prune_after);
  register_eval(app, eval);
  app.allow_config_extras(CLI::config_extras_mode::error);
  for (CLI::App* sub : app.get_subcommands({})) sub->allow_config_extras(CLI::config_extras_mode::error);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  set_max_threads(serial ? 1u : threads);
  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (name == "simulate") return cmd_simulate(simulate, out);
    if (name == "train") return cmd_train(train_args, out, err);
    if (name == "prune-init") return cmd_prune_init(prune_init, out, err);
    if (name == "prune-after") return cmd_prune_after(prune_after, out, err);
    if (name == "eval") return cmd_eval(eval, out);
  } catch (const UsageError& e) {
    err << "pun " << name << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "pun " << name << ": error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace pun::cli

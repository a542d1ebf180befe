// Command-line front end: segment, train, features, phantom, eval, slic-export.
#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <sstream>
#include <iostream>

#include "lungseg/evaluation.hpp"
#include "lungseg/feature_io.hpp"
#include "lungseg/nifti.hpp"
#include "lungseg/pipeline.hpp"

using json = nlohmann::ordered_json;
using namespace lungseg;

namespace {

struct SegmentOpts {
  std::string input, model, output, report;
};

struct TrainOpts {
  std::string data, output;
  int phantoms = 0;
  std::uint64_t phantom_seed = 100;
  ForestParams params;
};

struct FeatureOpts {
  std::string input, truth, output;
};

struct PhantomOpts {
  std::string spec, output, truth;
  std::uint64_t seed = 1;
  std::string pathology = "both";
};

struct EvalOpts {
  std::string model, manifest, report;
  int phantoms = 0;
  std::uint64_t seed = 200;
  std::string pathology = "both";
};

struct SlicExportOpts {
  std::string input, region, output;
  int k = 0;
};

void add_pipeline_flags(CLI::App* cmd, PipelineConfig& config) {
  cmd->add_option("--fc-mean", config.fc_mean, "Parenchyma mean HU for affinity and threshold")
      ->capture_default_str();
  cmd->add_option("--fc-sigma", config.fc_sigma, "Affinity standard deviation in HU")
      ->capture_default_str();
  cmd->add_option("--fc-theta", config.fc_theta, "Connectivity cutoff in (0,1]")
      ->capture_default_str();
  cmd->add_option("--band-halfwidth", config.band_halfwidth,
                  "Half width of the threshold band in HU")
      ->capture_default_str();
  cmd->add_option("--seed-rng", config.seed_rng, "RNG seed for automatic seed selection")
      ->capture_default_str();
  cmd->add_option("--bone-hu", config.bone_hu, "Bone threshold for rib cage extraction")
      ->capture_default_str();
  cmd->add_option("--slic-k", config.slic_k,
                  "Supervoxel count; 0 derives it from --sv-target-volume")
      ->capture_default_str();
  cmd->add_option("--sv-target-volume", config.sv_target_volume,
                  "Target mean supervoxel volume in voxels")
      ->capture_default_str();
  cmd->add_option("--slic-compactness", config.slic_compactness,
                  "Intensity-vs-space weighting in HU per grid interval")
      ->capture_default_str();
  cmd->add_option("--slic-max-iters", config.slic_max_iters, "Clustering iteration cap")
      ->capture_default_str();
  cmd->add_option("--slic-tol", config.slic_tol, "Residual convergence cutoff")
      ->capture_default_str();
  cmd->add_option("--rf-threshold", config.rf_threshold,
                  "Vote fraction required for a pathology verdict")
      ->capture_default_str();
  cmd->add_flag("--per-voxel", config.per_voxel,
                "Classify every search-space voxel instead of supervoxel centroids");
  cmd->add_option("--threads", config.threads, "Worker thread cap for classification")
      ->capture_default_str();
}

// Resolved parameter set of the active subcommand, defaults included,
// for exact reruns.
std::string resolved_config(const CLI::App& app) {
  std::vector<std::string> prefixes;
  const CLI::App* cur = &app;
  std::string path;
  while (!cur->get_subcommands({}).empty()) {
    const auto parsed = cur->get_subcommands();
    if (parsed.empty()) break;
    cur = parsed.front();
    path += cur->get_name() + ".";
    prefixes.push_back(path);
  }

  std::istringstream all(app.config_to_str(true, false));
  std::ostringstream out;
  std::string line;
  while (std::getline(all, line)) {
    if (line.empty()) continue;
    const std::string key = line.substr(0, line.find('='));
    bool active = key.find('.') == std::string::npos;  // top-level option
    for (const auto& p : prefixes)
      if (key.rfind(p, 0) == 0 && key.find('.', p.size()) == std::string::npos) active = true;
    if (active) out << line << "\n";
  }
  return out.str();
}

json timings_to_json(const std::vector<StageTiming>& timings) {
  json out = json::object();
  for (const auto& t : timings) {
    if (t.ran)
      out[t.name] = t.millis;
    else
      out[t.name] = "skipped";
  }
  return out;
}

void log_timings(const std::vector<StageTiming>& timings) {
  for (const auto& t : timings) {
    if (t.ran)
      std::cerr << "[timing] " << t.name << " " << t.millis << " ms\n";
    else
      std::cerr << "[timing] " << t.name << " skipped\n";
  }
}

int run_segment(const SegmentOpts& opts, const PipelineConfig& config,
                const std::string& config_echo) {
  const Volume vol = load_nifti(opts.input);
  const ForestModel model = load_forest(opts.model);
  const PipelineResult res = run_pipeline(vol, model, config);
  save_mask_nifti(res.final_mask, opts.output);
  log_timings(res.timings);

  std::cout << "final mask: " << res.final_mask.count_nonzero() << " voxels ("
            << res.initial_mask.count_nonzero() << " from stage one, "
            << res.pathology_mask.count_nonzero() << " pathology)\n";

  if (!opts.report.empty()) {
    json report;
    report["config"] = config_echo;
    report["input"] = opts.input;
    report["model"] = opts.model;
    report["output"] = opts.output;
    report["seeds"] = {{"left", {res.seeds.left.x, res.seeds.left.y, res.seeds.left.z}},
                       {"right", {res.seeds.right.x, res.seeds.right.y, res.seeds.right.z}}};
    report["search_space_voxels"] = res.search_space_voxels;
    report["slic"] = {{"k_requested", res.slic_k_requested},
                      {"k_actual", res.slic_k_actual},
                      {"grid_interval", res.slic_grid_interval},
                      {"residuals", res.slic_residuals}};
    report["masks"] = {{"initial_voxels", res.initial_mask.count_nonzero()},
                       {"pathology_voxels", res.pathology_mask.count_nonzero()},
                       {"final_voxels", res.final_mask.count_nonzero()}};
    json records = json::array();
    for (const auto& rec : res.records)
      records.push_back({{"id", rec.id},
                         {"centroid", {rec.centroid.x, rec.centroid.y, rec.centroid.z}},
                         {"score", rec.score},
                         {"label", to_string(rec.label)},
                         {"voxels", rec.voxels}});
    report["supervoxels"] = std::move(records);
    report["timings"] = timings_to_json(res.timings);
    std::ofstream out(opts.report, std::ios::trunc);
    if (!out) throw IoError("cannot open report file: " + opts.report);
    out << report.dump(2) << "\n";
  }
  return 0;
}

int run_train(const TrainOpts& opts, const PipelineConfig& config) {
  TrainingSet set;
  if (!opts.data.empty()) {
    set = to_training_set(read_feature_csv(opts.data));
  } else if (opts.phantoms > 0) {
    std::vector<std::uint64_t> seeds;
    for (int i = 0; i < opts.phantoms; ++i) seeds.push_back(opts.phantom_seed + i);
    set = build_phantom_training_set(seeds, config);
  } else {
    throw ParamError("train needs --data or --phantoms");
  }

  long tp = 0, tn = 0;
  for (TissueLabel l : set.labels) (l == TissueLabel::Tp ? tp : tn)++;
  std::cout << "training rows: " << set.size() << " (Tp=" << tp << " Tn=" << tn << ")\n";

  const ForestModel model = train(set, opts.params);
  save_forest(model, opts.output);
  const OobReport oob = oob_accuracy(model, set);
  if (oob.accuracy)
    std::cout << "out-of-bag accuracy: " << *oob.accuracy << " over " << oob.evaluated
              << " rows\n";
  else
    std::cout << "out-of-bag accuracy: undefined (0 rows had out-of-bag trees)\n";
  std::cout << "model written to " << opts.output << "\n";
  return 0;
}

int run_features(const FeatureOpts& opts, const PipelineConfig& config) {
  const Volume vol = load_nifti(opts.input);
  const StagePrep prep = run_segmentation_prep(vol, config);
  log_timings(prep.timings);
  if (!prep.slic_ran) throw Error("search space is empty, no keypoints to export");

  LabelMask truth;
  const bool labeled = !opts.truth.empty();
  if (labeled) {
    truth = load_mask_nifti(opts.truth);
    if (!truth.same_dims(vol)) throw ParamError("truth mask dims do not match the volume");
  }

  std::vector<FeatureRecord> records;
  for (const auto& [id, voxel] : centroids(prep.svmap)) {
    FeatureRecord rec;
    rec.keypoint = voxel;
    rec.supervoxel_id = id;
    rec.features = extract_descriptor(vol, voxel, config.texture);
    if (labeled)
      rec.label = truth.at(voxel.x, voxel.y, voxel.z) != 0 ? TissueLabel::Tp : TissueLabel::Tn;
    records.push_back(std::move(rec));
  }
  write_feature_csv(opts.output, records, labeled);
  std::cout << "wrote " << records.size() << (labeled ? " labeled" : "") << " keypoint rows to "
            << opts.output << "\n";
  return 0;
}

int run_phantom(const PhantomOpts& opts) {
  PhantomSpec spec;
  if (!opts.spec.empty()) {
    spec = load_phantom_spec(opts.spec);
    spec.rng_seed = opts.seed;
  } else {
    const bool consolidation = opts.pathology == "both" || opts.pathology == "consolidation";
    const bool ggo = opts.pathology == "both" || opts.pathology == "ggo";
    if (!consolidation && !ggo && opts.pathology != "none")
      throw ParamError("unknown --pathology value: " + opts.pathology);
    spec = default_phantom(opts.seed, consolidation, ggo);
  }

  const PhantomCase pc = generate_phantom(spec);
  save_volume_nifti(pc.volume, opts.output);
  std::cout << "phantom volume " << pc.volume.nx << "x" << pc.volume.ny << "x" << pc.volume.nz
            << " -> " << opts.output << "\n";
  if (!opts.truth.empty()) {
    save_mask_nifti(pc.truth, opts.truth);
    std::cout << "ground truth (" << pc.truth.count_nonzero() << " voxels) -> " << opts.truth
              << "\n";
  }
  return 0;
}

int run_eval(const EvalOpts& opts, const PipelineConfig& config, const std::string& config_echo) {
  const ForestModel model = load_forest(opts.model);

  std::vector<PhantomCase> cases;
  std::vector<std::string> names;
  if (!opts.manifest.empty()) {
    std::ifstream in(opts.manifest);
    if (!in) throw IoError("cannot open manifest: " + opts.manifest);
    std::string vol_path, truth_path;
    while (in >> vol_path >> truth_path) {
      PhantomCase pc;
      pc.volume = load_nifti(vol_path);
      pc.truth = load_mask_nifti(truth_path);
      cases.push_back(std::move(pc));
      names.push_back(vol_path);
    }
    if (cases.empty()) throw ParamError("manifest lists no cases: " + opts.manifest);
  } else if (opts.phantoms > 0) {
    const bool consolidation = opts.pathology == "both" || opts.pathology == "consolidation";
    const bool ggo = opts.pathology == "both" || opts.pathology == "ggo";
    for (int i = 0; i < opts.phantoms; ++i) {
      const std::uint64_t seed = opts.seed + i;
      cases.push_back(generate_phantom(default_phantom(seed, consolidation, ggo)));
      names.push_back("phantom-" + std::to_string(seed));
    }
  } else {
    throw ParamError("eval run needs --manifest or --phantoms");
  }

  const EvalReport report = batch_evaluate(cases, names, model, config);
  for (const auto& c : report.cases) {
    if (c.ok)
      std::cout << c.name << ": dsc=" << c.dsc_final << " (stage one " << c.dsc_initial << ")\n";
    else
      std::cout << c.name << ": FAILED (" << c.error << ")\n";
  }
  std::cout << "mean dsc: " << report.mean_dsc << "  std: " << report.std_dsc
            << "  failures: " << report.failures << "/" << report.cases.size() << "\n";

  if (!opts.report.empty()) {
    json out;
    out["config"] = config_echo;
    out["mean_dsc"] = report.mean_dsc;
    out["std_dsc"] = report.std_dsc;
    out["failures"] = report.failures;
    json rows = json::array();
    for (const auto& c : report.cases)
      rows.push_back({{"name", c.name},
                      {"ok", c.ok},
                      {"dsc_final", c.dsc_final},
                      {"dsc_initial", c.dsc_initial},
                      {"truth_voxels", c.truth_voxels},
                      {"final_voxels", c.final_voxels},
                      {"error", c.error}});
    out["cases"] = std::move(rows);
    std::ofstream f(opts.report, std::ios::trunc);
    if (!f) throw IoError("cannot open report file: " + opts.report);
    f << out.dump(2) << "\n";
  }
  return 0;
}

int run_slic_export(const SlicExportOpts& opts, const PipelineConfig& config) {
  const Volume vol = load_nifti(opts.input);
  LabelMask region;
  if (!opts.region.empty()) {
    region = load_mask_nifti(opts.region);
    if (!region.same_dims(vol)) throw ParamError("region mask dims do not match the volume");
  } else {
    region = LabelMask(vol.nx, vol.ny, vol.nz, 1);
  }

  SlicParams params;
  const long n = region.count_nonzero();
  params.k =
      opts.k > 0 ? opts.k : std::max<int>(1, static_cast<int>(n / config.sv_target_volume));
  params.compactness = config.slic_compactness;
  params.max_iters = config.slic_max_iters;
  params.tol = config.slic_tol;

  const SupervoxelMap map = run_slic(vol, region, params);
  LabelMask labels(map.nx, map.ny, map.nz);
  for (std::size_t i = 0; i < labels.labels.size(); ++i)
    labels.labels[i] = map.assignment[i] == SupervoxelMap::kNone ? 0 : map.assignment[i] + 1;
  save_mask_nifti(labels, opts.output);
  std::cout << "wrote " << map.k_actual << " supervoxels (S=" << map.grid_interval << ") to "
            << opts.output << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-stage pathological lung segmentation for CT volumes"};
  app.require_subcommand(1);
  app.fallthrough();  // lets --config appear after the subcommand name
  app.set_config("--config", "", "Flat key=value config file; flags override file values");

  PipelineConfig config;
  SegmentOpts segment_opts;
  TrainOpts train_opts;
  FeatureOpts feature_opts;
  PhantomOpts phantom_opts;
  EvalOpts eval_opts;
  SlicExportOpts slic_opts;

  auto* segment = app.add_subcommand("segment", "Segment a CT volume into a lung mask");
  segment->add_option("--input", segment_opts.input, "Input NIfTI volume")->required();
  segment->add_option("--model", segment_opts.model, "Trained forest model file")->required();
  segment->add_option("--output", segment_opts.output, "Output NIfTI mask")->required();
  segment->add_option("--report", segment_opts.report, "JSON run report path");
  add_pipeline_flags(segment, config);

  auto* train_cmd = app.add_subcommand("train", "Train the pathology classifier");
  train_cmd->add_option("--data", train_opts.data, "Labeled feature CSV (from `features`)");
  train_cmd->add_option("--phantoms", train_opts.phantoms,
                        "Instead of --data: train on N generated phantoms")
      ->capture_default_str();
  train_cmd->add_option("--phantom-seed", train_opts.phantom_seed, "First phantom seed")
      ->capture_default_str();
  train_cmd->add_option("--output", train_opts.output, "Model file to write")->required();
  train_cmd->add_option("--trees", train_opts.params.n_trees, "Trees in the forest")
      ->capture_default_str();
  train_cmd->add_option("--bag-fraction", train_opts.params.bag_fraction,
                        "Share of the training set per tree")
      ->capture_default_str();
  train_cmd->add_option("--rf-seed", train_opts.params.rng_seed, "Training RNG seed")
      ->capture_default_str();
  train_cmd->add_flag("--rf-bootstrap", train_opts.params.bootstrap,
                      "Sample bags with replacement instead of subsetting");

  auto* features = app.add_subcommand("features", "Export keypoint descriptors as CSV");
  features->add_option("--input", feature_opts.input, "Input NIfTI volume")->required();
  features->add_option("--truth", feature_opts.truth, "Ground-truth mask; adds a label column");
  features->add_option("--output", feature_opts.output, "CSV path")->required();
  add_pipeline_flags(features, config);

  auto* phantom = app.add_subcommand("phantom", "Synthetic thoracic phantom tools");
  auto* generate = phantom->add_subcommand("generate", "Rasterize a phantom volume");
  generate->add_option("--spec", phantom_opts.spec, "Phantom spec file (key = value lines)");
  generate->add_option("--output", phantom_opts.output, "Output NIfTI volume")->required();
  generate->add_option("--truth", phantom_opts.truth, "Ground-truth mask output");
  generate->add_option("--seed", phantom_opts.seed, "Phantom RNG seed")->capture_default_str();
  generate->add_option("--pathology", phantom_opts.pathology,
                       "Blob selection: both, consolidation, ggo, none")
      ->capture_default_str();
  phantom->require_subcommand(1);

  auto* eval = app.add_subcommand("eval", "Batch evaluation against ground truth");
  auto* eval_run = eval->add_subcommand("run", "Run the pipeline over a case set");
  eval_run->add_option("--model", eval_opts.model, "Trained forest model file")->required();
  eval_run->add_option("--manifest", eval_opts.manifest,
                       "Text file of `volume.nii truth.nii` lines");
  eval_run->add_option("--phantoms", eval_opts.phantoms,
                       "Instead of --manifest: evaluate N generated phantoms")
      ->capture_default_str();
  eval_run->add_option("--seed", eval_opts.seed, "First phantom seed")->capture_default_str();
  eval_run->add_option("--pathology", eval_opts.pathology, "Phantom blob selection")
      ->capture_default_str();
  eval_run->add_option("--report", eval_opts.report, "JSON report path");
  add_pipeline_flags(eval_run, config);
  eval->require_subcommand(1);

  auto* slic_export = app.add_subcommand("slic-export", "Write a supervoxel label volume");
  slic_export->add_option("--input", slic_opts.input, "Input NIfTI volume")->required();
  slic_export->add_option("--region", slic_opts.region,
                          "Region mask; defaults to the whole volume");
  slic_export->add_option("--output", slic_opts.output, "Integer-labeled NIfTI output")
      ->required();
  slic_export->add_option("--slic-k", slic_opts.k, "Supervoxel count; 0 derives from volume")
      ->capture_default_str();
  slic_export->add_option("--sv-target-volume", config.sv_target_volume,
                          "Target mean supervoxel volume in voxels")
      ->capture_default_str();
  slic_export->add_option("--slic-compactness", config.slic_compactness,
                          "Intensity-vs-space weighting")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exit 0
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the error itself
    std::cerr << app.help() << "\n";
    return 1;
  }

  try {
    const std::string config_echo = resolved_config(app);
    std::cout << "# resolved configuration\n" << config_echo;
    if (*segment) return run_segment(segment_opts, config, config_echo);
    if (*train_cmd) return run_train(train_opts, config);
    if (*features) return run_features(feature_opts, config);
    if (*phantom) return run_phantom(phantom_opts);
    if (*eval) return run_eval(eval_opts, config, config_echo);
    if (*slic_export) return run_slic_export(slic_opts, config);
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}

// Python bindings for the core segmentation operations.
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

#include "lungseg/evaluation.hpp"
#include "lungseg/nifti.hpp"
#include "lungseg/pipeline.hpp"

namespace py = pybind11;
using namespace lungseg;

namespace {

// Volumes cross the boundary as (nx, ny, nz) Fortran-ordered arrays, which
// matches the row-major x-fastest layout byte for byte.

template <typename T>
py::array_t<T> grid_to_numpy(int nx, int ny, int nz, const std::vector<T>& data) {
  py::array_t<T> arr({nx, ny, nz},
                     {static_cast<py::ssize_t>(sizeof(T)),
                      static_cast<py::ssize_t>(sizeof(T)) * nx,
                      static_cast<py::ssize_t>(sizeof(T)) * nx * ny});
  std::memcpy(arr.mutable_data(), data.data(), data.size() * sizeof(T));
  return arr;
}

Volume volume_from_numpy(py::array values, std::array<double, 3> spacing) {
  auto arr = py::array_t<float, py::array::f_style | py::array::forcecast>::ensure(values);
  if (!arr || arr.ndim() != 3) throw ParamError("expected a 3D array of scalars");
  Volume vol(static_cast<int>(arr.shape(0)), static_cast<int>(arr.shape(1)),
             static_cast<int>(arr.shape(2)), 0.0f, spacing);
  std::memcpy(vol.data.data(), arr.data(), vol.size() * sizeof(float));
  return vol;
}

LabelMask mask_from_numpy(py::array labels) {
  auto arr =
      py::array_t<std::int32_t, py::array::f_style | py::array::forcecast>::ensure(labels);
  if (!arr || arr.ndim() != 3) throw ParamError("expected a 3D array of integer labels");
  LabelMask mask(static_cast<int>(arr.shape(0)), static_cast<int>(arr.shape(1)),
                 static_cast<int>(arr.shape(2)));
  std::memcpy(mask.labels.data(), arr.data(), mask.size() * sizeof(std::int32_t));
  return mask;
}

FeatureVector feature_vector_from(py::array_t<double> values) {
  auto buf = values.unchecked<1>();
  if (buf.shape(0) != static_cast<py::ssize_t>(FeatureVector::kSize))
    throw ParamError("feature vector must have 24 entries");
  FeatureVector fv;
  for (std::size_t i = 0; i < FeatureVector::kSize; ++i) fv.v[i] = buf(i);
  return fv;
}

TrainingSet training_set_from(py::array_t<double> features, py::array_t<int> labels) {
  auto f = features.unchecked<2>();
  auto l = labels.unchecked<1>();
  if (f.shape(1) != static_cast<py::ssize_t>(FeatureVector::kSize))
    throw ParamError("feature matrix must have 24 columns");
  if (f.shape(0) != l.shape(0)) throw ParamError("features and labels disagree on row count");
  TrainingSet set;
  for (py::ssize_t r = 0; r < f.shape(0); ++r) {
    FeatureVector fv;
    for (std::size_t i = 0; i < FeatureVector::kSize; ++i) fv.v[i] = f(r, i);
    set.push_back(fv, l(r) != 0 ? TissueLabel::Tp : TissueLabel::Tn);
  }
  return set;
}

SeedPair seed_pair_from(std::pair<std::array<int, 3>, std::array<int, 3>> seeds) {
  return {{seeds.first[0], seeds.first[1], seeds.first[2]},
          {seeds.second[0], seeds.second[1], seeds.second[2]}};
}

}  // namespace

PYBIND11_MODULE(_lungseg, m) {
  m.doc() = "Two-stage pathological lung segmentation: fuzzy-connectedness parenchyma "
            "extraction plus supervoxel-keypoint texture classification";

  py::register_exception<Error>(m, "LungsegError", PyExc_RuntimeError);

  py::class_<Volume>(m, "Volume")
      .def(py::init(&volume_from_numpy), py::arg("values"),
           py::arg("spacing") = std::array<double, 3>{1.0, 1.0, 1.0},
           "Build a volume from a 3D array indexed [x, y, z]")
      .def_property_readonly("shape",
                             [](const Volume& v) { return std::array<int, 3>{v.nx, v.ny, v.nz}; })
      .def_readonly("spacing", &Volume::spacing)
      .def("to_numpy", [](const Volume& v) { return grid_to_numpy(v.nx, v.ny, v.nz, v.data); });

  py::class_<LabelMask>(m, "LabelMask")
      .def(py::init(&mask_from_numpy), py::arg("labels"))
      .def_property_readonly(
          "shape", [](const LabelMask& mk) { return std::array<int, 3>{mk.nx, mk.ny, mk.nz}; })
      .def("count_nonzero", &LabelMask::count_nonzero)
      .def("to_numpy",
           [](const LabelMask& mk) { return grid_to_numpy(mk.nx, mk.ny, mk.nz, mk.labels); });

  // ---- stage one ----
  m.def("threshold", &threshold, py::arg("volume"), py::arg("center") = -550.0,
        py::arg("halfwidth") = 150.0, "Binary mask of the closed HU band");
  m.def(
      "select_seeds",
      [](const Volume& vol, const LabelMask& band, std::uint64_t rng_seed, int windows) {
        const SeedPair s = select_seeds(vol, band, rng_seed, windows);
        return std::make_pair(std::array<int, 3>{s.left.x, s.left.y, s.left.z},
                              std::array<int, 3>{s.right.x, s.right.y, s.right.z});
      },
      py::arg("volume"), py::arg("band_mask"), py::arg("rng_seed") = 7,
      py::arg("windows_per_side") = 10);
  m.def(
      "compute_connectivity",
      [](const Volume& vol, std::pair<std::array<int, 3>, std::array<int, 3>> seeds, double mean,
         double sigma, double theta, double prune_below) {
        const ConnectivityMap cmap =
            compute_connectivity(vol, seed_pair_from(seeds), {mean, sigma, theta}, prune_below);
        return grid_to_numpy(cmap.nx, cmap.ny, cmap.nz, cmap.strength);
      },
      py::arg("volume"), py::arg("seeds"), py::arg("mean") = -550.0, py::arg("sigma") = 150.0,
      py::arg("theta") = 0.5, py::arg("prune_below") = 0.0,
      "Per-voxel max-min connectivity strength from the seed pair");
  m.def(
      "binarize",
      [](py::array strength, double theta) {
        auto arr =
            py::array_t<double, py::array::f_style | py::array::forcecast>::ensure(strength);
        if (!arr || arr.ndim() != 3) throw ParamError("expected a 3D strength array");
        ConnectivityMap cmap;
        cmap.nx = static_cast<int>(arr.shape(0));
        cmap.ny = static_cast<int>(arr.shape(1));
        cmap.nz = static_cast<int>(arr.shape(2));
        cmap.strength.assign(arr.data(), arr.data() + arr.size());
        return binarize(cmap, theta);
      },
      py::arg("strength"), py::arg("theta") = 0.5);

  // ---- supervoxels ----
  py::class_<SupervoxelMap>(m, "SupervoxelMap")
      .def_readonly("k_requested", &SupervoxelMap::k_requested)
      .def_readonly("k_actual", &SupervoxelMap::k_actual)
      .def_readonly("grid_interval", &SupervoxelMap::grid_interval)
      .def_property_readonly("residuals",
                             [](const SupervoxelMap& mp) { return mp.diag.residuals; })
      .def("assignment",
           [](const SupervoxelMap& mp) {
             return grid_to_numpy(mp.nx, mp.ny, mp.nz, mp.assignment);
           })
      .def("centroids", [](const SupervoxelMap& mp) {
        std::vector<std::pair<int, std::array<int, 3>>> out;
        for (const auto& [id, v] : centroids(mp)) out.push_back({id, {v.x, v.y, v.z}});
        return out;
      });
  m.def(
      "run_slic",
      [](const Volume& vol, const LabelMask& region, int k, double compactness, int max_iters,
         double tol) {
        SlicParams params;
        params.k = k;
        params.compactness = compactness;
        params.max_iters = max_iters;
        params.tol = tol;
        return run_slic(vol, region, params);
      },
      py::arg("volume"), py::arg("region"), py::arg("k"), py::arg("compactness") = 10.0,
      py::arg("max_iters") = 10, py::arg("tol") = 1.0);

  // ---- texture ----
  m.def("feature_names", [] {
    std::vector<std::string> names(FeatureVector::kNames.begin(), FeatureVector::kNames.end());
    return names;
  });
  m.def(
      "extract_descriptor",
      [](const Volume& vol, std::array<int, 3> keypoint) {
        const FeatureVector fv = extract_descriptor(vol, {keypoint[0], keypoint[1], keypoint[2]});
        py::array_t<double> out(std::vector<py::ssize_t>{
            static_cast<py::ssize_t>(FeatureVector::kSize)});
        std::memcpy(out.mutable_data(), fv.v.data(), sizeof(fv.v));
        return out;
      },
      py::arg("volume"), py::arg("keypoint"),
      "24-element texture descriptor of the axial window around a keypoint");

  // ---- classifier ----
  py::class_<ForestModel>(m, "ForestModel")
      .def_property_readonly("n_trees", [](const ForestModel& fm) { return fm.params.n_trees; })
      .def_property_readonly("bag_fraction",
                             [](const ForestModel& fm) { return fm.params.bag_fraction; })
      .def(
          "predict",
          [](const ForestModel& fm, py::array_t<double> features, double threshold) {
            const Prediction p = predict(fm, feature_vector_from(features), threshold);
            return std::make_pair(static_cast<int>(p.label), p.score);
          },
          py::arg("features"), py::arg("threshold") = 0.5,
          "Returns (label, score): label 1 is pathological")
      .def("save", [](const ForestModel& fm, const std::string& path) { save_forest(fm, path); });
  m.def(
      "train_forest",
      [](py::array_t<double> features, py::array_t<int> labels, int n_trees, double bag_fraction,
         std::uint64_t rng_seed, bool bootstrap) {
        ForestParams params;
        params.n_trees = n_trees;
        params.bag_fraction = bag_fraction;
        params.rng_seed = rng_seed;
        params.bootstrap = bootstrap;
        return train(training_set_from(features, labels), params);
      },
      py::arg("features"), py::arg("labels"), py::arg("n_trees") = 70,
      py::arg("bag_fraction") = 0.6, py::arg("rng_seed") = 17, py::arg("bootstrap") = false);
  m.def("load_forest", &load_forest, py::arg("path"));
  m.def(
      "oob_accuracy",
      [](const ForestModel& fm, py::array_t<double> features, py::array_t<int> labels) {
        const OobReport report = oob_accuracy(fm, training_set_from(features, labels));
        return py::make_tuple(report.accuracy ? py::cast(*report.accuracy) : py::none(),
                              report.evaluated, report.skipped);
      },
      py::arg("model"), py::arg("features"), py::arg("labels"));

  // ---- pipeline ----
  py::class_<PipelineConfig>(m, "PipelineConfig")
      .def(py::init<>())
      .def_readwrite("fc_mean", &PipelineConfig::fc_mean)
      .def_readwrite("fc_sigma", &PipelineConfig::fc_sigma)
      .def_readwrite("fc_theta", &PipelineConfig::fc_theta)
      .def_readwrite("band_halfwidth", &PipelineConfig::band_halfwidth)
      .def_readwrite("seed_rng", &PipelineConfig::seed_rng)
      .def_readwrite("bone_hu", &PipelineConfig::bone_hu)
      .def_readwrite("slic_k", &PipelineConfig::slic_k)
      .def_readwrite("sv_target_volume", &PipelineConfig::sv_target_volume)
      .def_readwrite("slic_compactness", &PipelineConfig::slic_compactness)
      .def_readwrite("slic_max_iters", &PipelineConfig::slic_max_iters)
      .def_readwrite("slic_tol", &PipelineConfig::slic_tol)
      .def_readwrite("rf_threshold", &PipelineConfig::rf_threshold)
      .def_readwrite("per_voxel", &PipelineConfig::per_voxel)
      .def_readwrite("threads", &PipelineConfig::threads);

  py::class_<PipelineResult>(m, "PipelineResult")
      .def_property_readonly("initial_mask",
                             [](const PipelineResult& r) { return r.initial_mask; })
      .def_property_readonly("pathology_mask",
                             [](const PipelineResult& r) { return r.pathology_mask; })
      .def_property_readonly("final_mask", [](const PipelineResult& r) { return r.final_mask; })
      .def_readonly("search_space_voxels", &PipelineResult::search_space_voxels)
      .def_readonly("slic_k_actual", &PipelineResult::slic_k_actual)
      .def_property_readonly("timings", [](const PipelineResult& r) {
        std::vector<std::tuple<std::string, double, bool>> out;
        for (const auto& t : r.timings) out.push_back({t.name, t.millis, t.ran});
        return out;
      });
  m.def("run_pipeline", &run_pipeline, py::arg("volume"), py::arg("model"),
        py::arg("config") = PipelineConfig{}, "Full two-stage segmentation of a CT volume");
  m.def(
      "build_search_space",
      [](const Volume& vol, const LabelMask& fc_mask, double bone_hu) {
        return build_search_space(vol, fc_mask, bone_hu).mask;
      },
      py::arg("volume"), py::arg("initial_mask"), py::arg("bone_hu") = 200.0);

  // ---- phantoms and evaluation ----
  m.def(
      "generate_phantom",
      [](std::uint64_t seed, bool consolidation, bool ggo) {
        PhantomCase pc = generate_phantom(default_phantom(seed, consolidation, ggo));
        return std::make_pair(std::move(pc.volume), std::move(pc.truth));
      },
      py::arg("seed") = 1, py::arg("consolidation") = true, py::arg("ggo") = true,
      "Seeded synthetic thoracic phantom; returns (volume, ground_truth)");
  m.def(
      "build_phantom_training_set",
      [](const std::vector<std::uint64_t>& seeds, const PipelineConfig& config) {
        const TrainingSet set = build_phantom_training_set(seeds, config);
        py::array_t<double> features({static_cast<py::ssize_t>(set.size()),
                                      static_cast<py::ssize_t>(FeatureVector::kSize)});
        py::array_t<int> labels(std::vector<py::ssize_t>{static_cast<py::ssize_t>(set.size())});
        auto f = features.mutable_unchecked<2>();
        auto l = labels.mutable_unchecked<1>();
        for (std::size_t r = 0; r < set.size(); ++r) {
          for (std::size_t i = 0; i < FeatureVector::kSize; ++i) f(r, i) = set.features[r][i];
          l(r) = static_cast<int>(set.labels[r]);
        }
        return std::make_pair(features, labels);
      },
      py::arg("seeds"), py::arg("config") = PipelineConfig{});
  m.def("dice", &dice, py::arg("a"), py::arg("b"));

  // ---- file I/O ----
  m.def("load_volume", &load_nifti, py::arg("path"));
  m.def("save_volume", &save_volume_nifti, py::arg("volume"), py::arg("path"));
  m.def("load_mask", &load_mask_nifti, py::arg("path"));
  m.def("save_mask", &save_mask_nifti, py::arg("mask"), py::arg("path"));
}

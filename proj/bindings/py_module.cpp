// Python surface of the engine. Thin by design: numpy in, numpy out, all
// heavy lifting stays in the C++ core. Long-running calls release the GIL.

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ballsim/fit.hpp"
#include "ballsim/synth.hpp"
#include "evalkit/eval.hpp"
#include "trajkit/dataset_io.hpp"
#include "trajkit/errors.hpp"
#include "trajkit/ops.hpp"
#include "trajkit/rng.hpp"
#include "trajkit/types.hpp"
#include "tvae/model.hpp"
#include "tvae/model_io.hpp"
#include "tvae/predict.hpp"
#include "tvae/train.hpp"

namespace py = pybind11;
using trajkit::Vec3;

namespace {

Eigen::MatrixXd positions_matrix(const std::vector<Vec3>& v) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(v.size()), 3);
  for (Eigen::Index i = 0; i < out.rows(); ++i) out.row(i) = v[static_cast<std::size_t>(i)];
  return out;
}

Eigen::VectorXd vector_of(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

trajkit::Trajectory make_trajectory(std::int64_t id, const std::vector<double>& times,
                                    const Eigen::Ref<const Eigen::MatrixXd>& positions,
                                    const std::optional<std::vector<std::uint8_t>>& valid) {
  if (positions.cols() != 3) throw trajkit::DataError("positions must have shape (n, 3)");
  if (positions.rows() != static_cast<Eigen::Index>(times.size()))
    throw trajkit::DataError("times and positions disagree on the sample count");
  trajkit::Trajectory traj;
  traj.id = id;
  traj.times = times;
  traj.positions.reserve(times.size());
  for (Eigen::Index i = 0; i < positions.rows(); ++i)
    traj.positions.push_back(positions.row(i).transpose());
  if (valid) traj.valid = *valid;
  trajkit::validate(traj);
  return traj;
}

// Grid index one past the requested number of observed samples; the whole
// observation when given < 0.
int cut_for_given(const trajkit::MaskedTrajectory& m, int given) {
  if (given < 0) return m.observed_length();
  if (given == 0) return 0;
  int seen = 0;
  for (int i = 0; i < m.size(); ++i)
    if (m.mask[static_cast<std::size_t>(i)] && ++seen == given) return i + 1;
  throw trajkit::DataError("prefix of " + std::to_string(given) +
                           " observed samples exceeds the " +
                           std::to_string(m.observed_count()) + " available");
}

trajkit::MaskedTrajectory observed_prefix(const trajkit::Trajectory& traj,
                                          const trajkit::TimeGrid& grid, int given) {
  const trajkit::MaskedTrajectory on_grid = trajkit::resample_to_grid(traj, grid);
  if (on_grid.observed_count() == 0)
    throw trajkit::DataError("no samples of trajectory " + std::to_string(traj.id) +
                             " land on the grid");
  return trajkit::make_prefix(on_grid, cut_for_given(on_grid, given));
}

struct PyPrediction {
  tvae::PredictionEnsemble ensemble;
  trajkit::TimeGrid grid;
};

py::dict curve_dict(const evalkit::ErrorCurve& c) {
  py::dict out;
  out["given"] = vector_of(c.abscissa);
  out["mean"] = vector_of(c.mean);
  out["stddev"] = vector_of(c.stddev);
  out["count"] = Eigen::VectorXi(Eigen::Map<const Eigen::VectorXi>(
      c.count.data(), static_cast<Eigen::Index>(c.count.size())));
  out["skipped"] = c.skipped;
  return out;
}

tvae::TrainConfig train_config(int latent_dim, int hidden, bool ci, int epochs, int batch,
                               int mc_samples, double lr, double p_miss, double p_outlier,
                               bool stop_prefix_kl, bool plain_sgd, double val_fraction,
                               std::uint64_t seed) {
  tvae::TrainConfig cfg;
  cfg.latent_dim = latent_dim;
  cfg.hidden = hidden;
  cfg.ci = ci;
  cfg.epochs = epochs;
  cfg.batch = batch;
  cfg.mc_samples = mc_samples;
  cfg.lr = lr;
  cfg.p_miss = p_miss;
  cfg.p_outlier = p_outlier;
  cfg.stop_prefix_kl = stop_prefix_kl;
  cfg.plain_sgd = plain_sgd;
  cfg.val_fraction = val_fraction;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Ball-flight forecasting: simulated launches, a drag-and-bounce physics baseline "
            "and a trajectory variational auto-encoder.";

  py::register_exception<trajkit::DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<trajkit::NumericError>(m, "NumericError", PyExc_ArithmeticError);

  py::class_<trajkit::TimeGrid>(m, "TimeGrid")
      .def(py::init([](double dt, int steps, double origin) {
             trajkit::TimeGrid g;
             g.dt = dt;
             g.steps = steps;
             g.origin = origin;
             trajkit::validate(g);
             return g;
           }),
           py::arg("dt") = 1.0 / 180.0, py::arg("steps") = 216, py::arg("origin") = 0.0)
      .def_readonly("dt", &trajkit::TimeGrid::dt)
      .def_readonly("steps", &trajkit::TimeGrid::steps)
      .def_readonly("origin", &trajkit::TimeGrid::origin)
      .def_property_readonly("times", [](const trajkit::TimeGrid& g) {
        Eigen::VectorXd t(g.steps);
        for (int i = 0; i < g.steps; ++i) t[i] = g.time(i);
        return t;
      })
      .def("__repr__", [](const trajkit::TimeGrid& g) {
        return "TimeGrid(dt=" + std::to_string(g.dt) + ", steps=" + std::to_string(g.steps) +
               ", origin=" + std::to_string(g.origin) + ")";
      });

  py::class_<trajkit::Trajectory>(m, "Trajectory")
      .def(py::init(&make_trajectory), py::arg("id"), py::arg("times"), py::arg("positions"),
           py::arg("valid") = std::nullopt)
      .def_readonly("id", &trajkit::Trajectory::id)
      .def_property_readonly("times",
                             [](const trajkit::Trajectory& t) { return vector_of(t.times); })
      .def_property_readonly(
          "positions", [](const trajkit::Trajectory& t) { return positions_matrix(t.positions); })
      .def_property_readonly("valid",
                             [](const trajkit::Trajectory& t) {
                               std::vector<std::uint8_t> v = t.valid;
                               if (v.empty()) v.assign(t.size(), 1);
                               return v;
                             })
      .def("__len__", [](const trajkit::Trajectory& t) { return t.size(); });

  py::class_<trajkit::DatasetEntry>(m, "DatasetEntry")
      .def_readonly("trajectory", &trajkit::DatasetEntry::traj)
      .def_property_readonly("split",
                             [](const trajkit::DatasetEntry& e) { return to_string(e.split); })
      .def_property_readonly("truth", [](const trajkit::DatasetEntry& e) -> py::object {
        if (!e.has_truth()) return py::none();
        return py::cast(positions_matrix(e.truth));
      });

  py::class_<trajkit::Dataset>(m, "Dataset")
      .def("__len__", [](const trajkit::Dataset& ds) { return ds.size(); })
      .def("__getitem__",
           [](const trajkit::Dataset& ds, std::size_t i) {
             if (i >= ds.size()) throw py::index_error();
             return ds.entries[i];
           })
      .def("counts",
           [](const trajkit::Dataset& ds) {
             py::dict out;
             out["train"] = ds.count(trajkit::Split::Train);
             out["val"] = ds.count(trajkit::Split::Val);
             out["test"] = ds.count(trajkit::Split::Test);
             return out;
           })
      .def("save", [](const trajkit::Dataset& ds, const std::string& path) {
        trajkit::write_dataset(path, ds);
      }, py::arg("path"));

  m.def(
      "synthesize",
      [](int count, double noise_std, std::uint64_t seed, double test_fraction) {
        const ballsim::LaunchDistribution launch;
        const trajkit::TimeGrid grid;
        const ballsim::PhysicsParams params;
        py::gil_scoped_release release;
        return ballsim::synth_dataset(count, launch, grid, params, noise_std, seed, test_fraction);
      },
      py::arg("count"), py::arg("noise_std") = 0.01, py::arg("seed") = 0,
      py::arg("test_fraction") = 1.0 / 11.0,
      "Simulate ball launches on the default grid; the last round(count * test_fraction) "
      "trajectories form the test split.");

  m.def("read_dataset", [](const std::string& path) { return trajkit::read_dataset(path); },
        py::arg("path"));
  m.def("write_dataset", [](const std::string& path, const trajkit::Dataset& ds) {
    trajkit::write_dataset(path, ds);
  }, py::arg("path"), py::arg("dataset"));

  py::class_<tvae::TvaeModel>(m, "Model")
      .def_readonly("latent_dim", &tvae::TvaeModel::latent_dim)
      .def_readonly("hidden", &tvae::TvaeModel::hidden)
      .def_readonly("ci", &tvae::TvaeModel::ci)
      .def_readonly("grid", &tvae::TvaeModel::grid)
      .def("save",
           [](const tvae::TvaeModel& model, const std::string& path) {
             tvae::save_model(path, model);
           },
           py::arg("path"))
      .def("__repr__", [](const tvae::TvaeModel& model) {
        return "Model(latent_dim=" + std::to_string(model.latent_dim) +
               ", hidden=" + std::to_string(model.hidden) +
               ", ci=" + std::string(model.ci ? "True" : "False") + ")";
      });

  m.def("load_model", [](const std::string& path) { return tvae::load_model(path); },
        py::arg("path"));

  py::class_<tvae::TrainResult>(m, "TrainResult")
      .def_readonly("model", &tvae::TrainResult::model)
      .def_readonly("best_val_loss", &tvae::TrainResult::best_val_loss)
      .def_readonly("best_epoch", &tvae::TrainResult::best_epoch)
      .def_property_readonly("history", [](const tvae::TrainResult& r) {
        // one row per epoch: epoch number, train loss, validation loss
        Eigen::MatrixXd h(static_cast<Eigen::Index>(r.history.size()), 3);
        for (Eigen::Index i = 0; i < h.rows(); ++i) {
          const auto& e = r.history[static_cast<std::size_t>(i)];
          h(i, 0) = e.epoch;
          h(i, 1) = e.train_loss;
          h(i, 2) = e.val_loss;
        }
        return h;
      });

  m.def(
      "train",
      [](const trajkit::Dataset& ds, int latent_dim, int hidden, bool ci, int epochs, int batch,
         int mc_samples, double lr, double p_miss, double p_outlier, bool stop_prefix_kl,
         bool plain_sgd, double val_fraction, std::uint64_t seed) {
        const tvae::TrainConfig cfg =
            train_config(latent_dim, hidden, ci, epochs, batch, mc_samples, lr, p_miss, p_outlier,
                         stop_prefix_kl, plain_sgd, val_fraction, seed);
        py::gil_scoped_release release;
        return tvae::train(ds, cfg);
      },
      py::arg("dataset"), py::arg("latent_dim") = 64, py::arg("hidden") = 256,
      py::arg("ci") = true, py::arg("epochs") = 2000, py::arg("batch") = 64,
      py::arg("mc_samples") = 1, py::arg("lr") = 1e-3, py::arg("p_miss") = 0.05,
      py::arg("p_outlier") = 0.01, py::arg("stop_prefix_kl") = false,
      py::arg("plain_sgd") = false, py::arg("val_fraction") = 0.1, py::arg("seed") = 0,
      "Fit a model on the dataset's train split; returns the best-validation snapshot "
      "plus the loss history. Deterministic in the seed.");

  py::class_<PyPrediction>(m, "Prediction")
      .def_property_readonly("cut", [](const PyPrediction& p) { return p.ensemble.cut; })
      .def_property_readonly("times",
                             [](const PyPrediction& p) {
                               Eigen::VectorXd t(p.grid.steps);
                               for (int i = 0; i < p.grid.steps; ++i) t[i] = p.grid.time(i);
                               return t;
                             })
      .def_property_readonly("latents", [](const PyPrediction& p) { return p.ensemble.latents; })
      .def_property_readonly("samples",
                             [](const PyPrediction& p) {
                               const auto& s = p.ensemble.samples;
                               const auto L = static_cast<py::ssize_t>(s.size());
                               const auto N = static_cast<py::ssize_t>(p.grid.steps);
                               py::array_t<double> out({L, N, static_cast<py::ssize_t>(3)});
                               auto w = out.mutable_unchecked<3>();
                               for (py::ssize_t l = 0; l < L; ++l)
                                 for (py::ssize_t i = 0; i < N; ++i)
                                   for (py::ssize_t d = 0; d < 3; ++d)
                                     w(l, i, d) = s[static_cast<std::size_t>(l)]
                                                   [static_cast<std::size_t>(i)][d];
                               return out;
                             })
      .def_property_readonly("mean",
                             [](const PyPrediction& p) {
                               if (p.ensemble.samples.size() < 2)
                                 return positions_matrix(p.ensemble.samples.front());
                               return positions_matrix(tvae::ensemble_moments(p.ensemble).mean);
                             })
      .def_property_readonly("cov", [](const PyPrediction& p) -> py::object {
        if (p.ensemble.samples.size() < 2) return py::none();
        const tvae::EnsembleMoments mom = tvae::ensemble_moments(p.ensemble);
        const auto N = static_cast<py::ssize_t>(mom.cov.size());
        py::array_t<double> out({N, static_cast<py::ssize_t>(3), static_cast<py::ssize_t>(3)});
        auto w = out.mutable_unchecked<3>();
        for (py::ssize_t i = 0; i < N; ++i)
          for (py::ssize_t r = 0; r < 3; ++r)
            for (py::ssize_t c = 0; c < 3; ++c) w(i, r, c) = mom.cov[static_cast<std::size_t>(i)](r, c);
        return out;
      });

  m.def(
      "predict",
      [](const tvae::TvaeModel& model, const std::vector<double>& times,
         const Eigen::Ref<const Eigen::MatrixXd>& positions,
         const std::optional<std::vector<std::uint8_t>>& valid, int given, int samples,
         std::uint64_t seed, bool mean_only) {
        const trajkit::Trajectory traj = make_trajectory(0, times, positions, valid);
        const trajkit::MaskedTrajectory prefix = observed_prefix(traj, model.grid, given);
        trajkit::Rng rng = trajkit::make_rng(seed);
        PyPrediction out;
        out.grid = model.grid;
        {
          py::gil_scoped_release release;
          out.ensemble = tvae::predict_ensemble(model, prefix, samples, rng, mean_only);
        }
        return out;
      },
      py::arg("model"), py::arg("times"), py::arg("positions"), py::arg("valid") = std::nullopt,
      py::arg("given") = -1, py::arg("samples") = 30, py::arg("seed") = 0,
      py::arg("mean_only") = false,
      "Sample full-horizon futures conditioned on the first `given` observed samples "
      "(all of them when given < 0). The observation is nearest-neighbor matched onto "
      "the model's grid, anchored at its first sample.");

  m.def(
      "physics_predict",
      [](const std::vector<double>& times, const Eigen::Ref<const Eigen::MatrixXd>& positions,
         const std::optional<std::vector<std::uint8_t>>& valid, int given) {
        const trajkit::TimeGrid grid;
        const ballsim::PhysicsParams params;
        const trajkit::Trajectory traj = make_trajectory(0, times, positions, valid);
        const trajkit::MaskedTrajectory prefix = observed_prefix(traj, grid, given);
        py::gil_scoped_release release;
        return positions_matrix(ballsim::physics_predict(prefix, grid, params));
      },
      py::arg("times"), py::arg("positions"), py::arg("valid") = std::nullopt,
      py::arg("given") = -1,
      "Launch-fit plus ODE integration over the default grid; returns one position per "
      "grid step.");

  m.def(
      "evaluate_physics",
      [](const trajkit::Dataset& ds, const std::optional<std::vector<int>>& given) {
        const trajkit::TimeGrid grid;
        const evalkit::Predictor pred = evalkit::physics_predictor(ballsim::PhysicsParams{}, grid);
        evalkit::ErrorCurve curve;
        {
          py::gil_scoped_release release;
          curve = evalkit::error_vs_given(pred, ds, given.value_or(evalkit::default_given_values()),
                                          grid);
        }
        return curve_dict(curve);
      },
      py::arg("dataset"), py::arg("given") = std::nullopt,
      "Physics-baseline error on the dataset's test split as a function of the prefix length.");

  m.def(
      "evaluate_model",
      [](const tvae::TvaeModel& model, const trajkit::Dataset& ds,
         const std::optional<std::vector<int>>& given, int samples, std::uint64_t seed) {
        const evalkit::Predictor pred = evalkit::tvae_predictor(model, samples, seed);
        evalkit::ErrorCurve curve;
        {
          py::gil_scoped_release release;
          curve = evalkit::error_vs_given(pred, ds, given.value_or(evalkit::default_given_values()),
                                          model.grid);
        }
        return curve_dict(curve);
      },
      py::arg("model"), py::arg("dataset"), py::arg("given") = std::nullopt,
      py::arg("samples") = 30, py::arg("seed") = 0,
      "Ensemble-mean error on the dataset's test split as a function of the prefix length.");

  m.def(
      "gaussian_kl",
      [](const Eigen::VectorXd& mean_q, const Eigen::VectorXd& std_q,
         const Eigen::VectorXd& mean_p, const Eigen::VectorXd& std_p) {
        tvae::LatentGaussian q, p;
        q.mean = mean_q, q.std = std_q, p.mean = mean_p, p.std = std_p;
        return tvae::gaussian_kl(q, p);
      },
      py::arg("mean_q"), py::arg("std_q"), py::arg("mean_p"), py::arg("std_p"),
      "KL(q || p) between diagonal Gaussians, in nats.");
}

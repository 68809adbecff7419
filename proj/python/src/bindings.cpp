#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hvi/bounds.hpp"
#include "hvi/estimators.hpp"
#include "hvi/model_registry.hpp"
#include "hvi/models.hpp"
#include "hvi/paths.hpp"
#include "hvi/quadrature.hpp"
#include "hvi/tuning.hpp"

namespace py = pybind11;

namespace {

py::dict curve_to_dict(const hvi::CurveSummary& c) {
  std::vector<double> betas;
  std::vector<double> values;
  std::vector<double> std_errs;
  for (const auto& p : c.points) {
    betas.push_back(p.beta);
    values.push_back(p.estimate.value);
    std_errs.push_back(p.estimate.std_err);
  }
  py::dict d;
  d["alpha"] = c.alpha;
  d["betas"] = betas;
  d["values"] = values;
  d["std_errs"] = std_errs;
  d["range"] = c.range;
  d["slope"] = c.slope;
  d["slope_std_err"] = c.slope_std_err;
  return d;
}

py::dict search_to_dict(const hvi::AlphaSearchResult& r) {
  py::dict d;
  d["alpha_hat"] = r.alpha_hat;
  d["method"] = r.method;
  d["evaluations"] = r.evaluations;
  d["iterations"] = r.iterations;
  d["statistically_flat"] = r.statistically_flat;
  d["exhausted"] = r.exhausted;
  d["final"] = curve_to_dict(r.final);
  py::list table;
  for (const auto& c : r.table) table.append(curve_to_dict(c));
  d["table"] = table;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Holder-path variational bounds: models, estimators, quadrature and tuning";

  py::class_<hvi::LatentModel, std::unique_ptr<hvi::LatentModel>>(m, "Model")
      .def_property_readonly("id", [](const hvi::LatentModel& self) { return std::string(self.id()); })
      .def_property_readonly("latent_dim", &hvi::LatentModel::latent_dim)
      .def_property_readonly("has_gradients", &hvi::LatentModel::has_gradients)
      .def_property_readonly("parameter_names",
                             [](const hvi::LatentModel& self) { return self.parameters().names(); })
      .def_property_readonly("parameter_values",
                             [](const hvi::LatentModel& self) { return self.parameters().values(); })
      .def("set_parameter_values", &hvi::LatentModel::set_parameter_values, py::arg("values"))
      .def("log_target", py::overload_cast<const hvi::Vector&>(&hvi::LatentModel::log_target, py::const_),
           py::arg("z"))
      .def("log_proposal", py::overload_cast<const hvi::Vector&>(&hvi::LatentModel::log_proposal, py::const_),
           py::arg("z"));

  m.def("model_ids", &hvi::model_ids);
  m.def(
      "_make_model",
      [](const std::string& id, const std::string& params_json) {
        return hvi::make_model(id, nlohmann::json::parse(params_json));
      },
      py::arg("id"), py::arg("params_json") = "{}");

  py::class_<hvi::ImportanceBatch>(m, "ImportanceBatch")
      .def_property_readonly("size", &hvi::ImportanceBatch::size)
      .def_readonly("seed", &hvi::ImportanceBatch::seed)
      .def_readonly("log_proposal", &hvi::ImportanceBatch::log_proposal)
      .def_readonly("log_target", &hvi::ImportanceBatch::log_target)
      .def_readonly("log_ratio", &hvi::ImportanceBatch::log_ratio)
      .def_readonly("samples", &hvi::ImportanceBatch::samples);
  m.def("draw_batch", py::overload_cast<const hvi::LatentModel&, std::size_t, std::uint64_t>(&hvi::draw_batch),
        py::arg("model"), py::arg("samples"), py::arg("seed"));

  py::class_<hvi::PathSpec>(m, "PathSpec")
      .def_static("geometric", &hvi::PathSpec::geometric)
      .def_static("holder", &hvi::PathSpec::holder, py::arg("alpha"))
      .def_static("wasserstein", &hvi::PathSpec::wasserstein)
      .def_static("perturbed", &hvi::PathSpec::perturbed, py::arg("delta"))
      .def_property_readonly("alpha", &hvi::PathSpec::alpha)
      .def_property_readonly("label", &hvi::PathSpec::label)
      .def("__repr__", [](const hvi::PathSpec& self) { return "PathSpec(" + self.label() + ")"; });

  py::class_<hvi::PartitionSchedule>(m, "PartitionSchedule")
      .def_static("uniform", &hvi::PartitionSchedule::uniform, py::arg("intervals"))
      .def_static("log", &hvi::PartitionSchedule::log, py::arg("intervals"),
                  py::arg("first_beta") = std::pow(10.0, hvi::PartitionSchedule::kLogFirstBetaExponent))
      .def_static("from_points", &hvi::PartitionSchedule::from_points, py::arg("betas"))
      .def_property_readonly("betas", &hvi::PartitionSchedule::betas)
      .def_property_readonly("intervals", &hvi::PartitionSchedule::intervals)
      .def_property_readonly("label", &hvi::PartitionSchedule::label);

  py::enum_<hvi::IntegrationRule>(m, "IntegrationRule")
      .value("left", hvi::IntegrationRule::Left)
      .value("right", hvi::IntegrationRule::Right)
      .value("trapezoid", hvi::IntegrationRule::Trapezoid);

  py::class_<hvi::LocalEvidenceEstimate>(m, "LocalEvidenceEstimate")
      .def_readonly("value", &hvi::LocalEvidenceEstimate::value)
      .def_readonly("std_err", &hvi::LocalEvidenceEstimate::std_err)
      .def_readonly("ess", &hvi::LocalEvidenceEstimate::ess)
      .def_readonly("degenerate", &hvi::LocalEvidenceEstimate::degenerate);

  py::class_<hvi::ThermodynamicEstimate>(m, "ThermodynamicEstimate")
      .def_readonly("value", &hvi::ThermodynamicEstimate::value)
      .def_readonly("betas", &hvi::ThermodynamicEstimate::betas)
      .def_readonly("local", &hvi::ThermodynamicEstimate::local);

  py::class_<hvi::BoundSpec>(m, "BoundSpec")
      .def_static("elbo", &hvi::BoundSpec::elbo)
      .def_static("iw_elbo", &hvi::BoundSpec::iw_elbo)
      .def_static("rvi", &hvi::BoundSpec::rvi, py::arg("alpha"))
      .def_static("eubo", &hvi::BoundSpec::eubo)
      .def_static("wlbo", &hvi::BoundSpec::wlbo)
      .def_static("wubo", &hvi::BoundSpec::wubo)
      .def_static("tvo", &hvi::BoundSpec::tvo, py::arg("schedule") = std::nullopt,
                  py::arg("rule") = hvi::IntegrationRule::Left)
      .def_static("hbo", &hvi::BoundSpec::hbo, py::arg("alpha"), py::arg("schedule") = std::nullopt,
                  py::arg("rule") = hvi::IntegrationRule::Left)
      .def_static("perturbed_hbo", &hvi::BoundSpec::perturbed_hbo, py::arg("delta"),
                  py::arg("schedule") = std::nullopt, py::arg("rule") = hvi::IntegrationRule::Left)
      .def_property_readonly("id", &hvi::BoundSpec::id)
      .def("__repr__", [](const hvi::BoundSpec& self) { return "BoundSpec(" + self.id() + ")"; });

  m.def("evaluate_bound", &hvi::evaluate_bound, py::arg("batch"), py::arg("spec"));
  m.def(
      "compute_bounds",
      [](const hvi::ImportanceBatch& batch, const std::vector<hvi::BoundSpec>& specs) {
        py::dict out;
        for (const auto& [id, value] : hvi::compute_bounds(batch, specs).values) out[py::str(id)] = value;
        return out;
      },
      py::arg("batch"), py::arg("specs"));

  m.def("local_evidence", &hvi::local_evidence, py::arg("batch"), py::arg("path"), py::arg("beta"));
  m.def("elbo", &hvi::elbo, py::arg("batch"));
  m.def("iw_elbo", &hvi::iw_elbo, py::arg("batch"));
  m.def("rvi", &hvi::rvi, py::arg("batch"), py::arg("alpha"));
  m.def("eubo", &hvi::eubo, py::arg("batch"));
  m.def(
      "wasserstein_bounds",
      [](const hvi::ImportanceBatch& batch) {
        const auto b = hvi::wasserstein_bounds(batch);
        return py::make_tuple(b.wlbo, b.wubo);
      },
      py::arg("batch"));
  m.def("thermodynamic_integral", &hvi::thermodynamic_integral, py::arg("batch"), py::arg("path"),
        py::arg("schedule"), py::arg("rule") = hvi::IntegrationRule::Left);

  py::class_<hvi::QuadratureTable>(m, "QuadratureTable")
      .def(py::init<const hvi::LatentModel&>(), py::arg("model"))
      .def_property_readonly("size", &hvi::QuadratureTable::size)
      .def("log_marginal", &hvi::QuadratureTable::log_marginal)
      .def("log_normalizer", &hvi::QuadratureTable::log_normalizer, py::arg("path"), py::arg("beta"))
      .def("local_evidence", &hvi::QuadratureTable::local_evidence, py::arg("path"), py::arg("beta"));

  m.def("default_test_betas", &hvi::default_test_betas);
  m.def(
      "tune_alpha_grid",
      [](const hvi::LatentModel& model, const std::vector<double>& candidates, const std::vector<double>& betas,
         std::size_t samples, std::uint64_t seed) {
        return search_to_dict(hvi::tune_alpha_grid(model, candidates, betas, samples, seed));
      },
      py::arg("model"), py::arg("candidates"), py::arg("betas"), py::arg("samples"), py::arg("seed"));
  m.def(
      "tune_alpha_bisect",
      [](const hvi::LatentModel& model, double alpha_left, double alpha_right, const std::vector<double>& betas,
         std::size_t samples, double tolerance, std::size_t max_iters, std::uint64_t seed) {
        return search_to_dict(
            hvi::tune_alpha_bisect(model, alpha_left, alpha_right, betas, samples, tolerance, max_iters, seed));
      },
      py::arg("model"), py::arg("alpha_left"), py::arg("alpha_right"), py::arg("betas"), py::arg("samples"),
      py::arg("tolerance"), py::arg("max_iters"), py::arg("seed"));
}

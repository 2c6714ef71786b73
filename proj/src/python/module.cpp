// Python bindings. Images cross the boundary as 2-D float64 numpy arrays
// indexed [y, x]; graphs as (N, 2) coordinate and (E, 2) index arrays.

#include <optional>
#include <sstream>
#include <string>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "gridadapt/adapt.hpp"
#include "gridadapt/distance_transform.hpp"
#include "gridadapt/dual.hpp"
#include "gridadapt/errors.hpp"
#include "gridadapt/eval.hpp"
#include "gridadapt/gdl_export.hpp"
#include "gridadapt/graph.hpp"
#include "gridadapt/image_io.hpp"
#include "gridadapt/render.hpp"
#include "gridadapt/serialize.hpp"
#include "gridadapt/synthetic.hpp"

namespace py = pybind11;
using namespace gridadapt;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Image toImage(const Array& a) {
  if (a.ndim() != 2) throw ParameterError("image must be a 2-D array");
  const auto h = static_cast<std::size_t>(a.shape(0));
  const auto w = static_cast<std::size_t>(a.shape(1));
  std::vector<double> data(a.data(), a.data() + w * h);
  return Image({w, h}, std::move(data));
}

Array toArray(const Image& img) {
  Array out({img.height(), img.width()});
  std::copy(img.data().begin(), img.data().end(), out.mutable_data());
  return out;
}

Array points(std::span<const double> flat, std::size_t dim) {
  Array out({flat.size() / dim, dim});
  std::copy(flat.begin(), flat.end(), out.mutable_data());
  return out;
}

py::array_t<std::int64_t> edgeArray(const std::vector<Edge>& edges) {
  py::array_t<std::int64_t> out({edges.size(), std::size_t{2}});
  auto r = out.mutable_unchecked<2>();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    r(e, 0) = std::int64_t(edges[e].first);
    r(e, 1) = std::int64_t(edges[e].second);
  }
  return out;
}

Array column(const std::vector<double>& v) {
  Array out(std::vector<py::ssize_t>{py::ssize_t(v.size())});
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

template <typename T>
T parseOr(std::optional<T> v, const std::string& what, const std::string& name) {
  if (!v) throw ParameterError("unknown " + what + " '" + name + "'");
  return *v;
}

Image contourFromMask(const Array& mask) {
  const Image raw = toImage(mask);
  std::vector<double> bin(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) bin[i] = raw[i] > 0.0 ? 1.0 : 0.0;
  return Image(raw.dims(), bin);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Feature-adapted triangulations of scalar images";
  m.attr("__version__") = GRIDADAPT_VERSION;

  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<RangeError>(m, "RangeError", PyExc_IndexError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<IntegrityError>(m, "IntegrityError", PyExc_RuntimeError);
  py::register_exception<EvaluationError>(m, "EvaluationError", PyExc_RuntimeError);

  m.def(
      "synth",
      [](const std::string& shape, std::size_t size, double sigma, std::uint64_t seed) {
        const auto kind = parseOr(parseShape(shape), "shape", shape);
        return toArray(generateSynthetic({kind, size}, sigma, seed));
      },
      py::arg("shape"), py::arg("size") = 128, py::arg("sigma") = 0.0, py::arg("seed") = 1,
      "Synthetic test image; sigma is a fraction of the 255 foreground level.");
  m.def(
      "contour",
      [](const std::string& shape, std::size_t size) {
        return toArray(groundTruthContour({parseOr(parseShape(shape), "shape", shape), size}));
      },
      py::arg("shape"), py::arg("size") = 128, "Ground-truth boundary mask (1 on the contour).");
  m.def("load_image", [](const std::filesystem::path& p) { return toArray(loadImage(p)); },
        py::arg("path"));
  m.def(
      "save_image", [](const Array& a, const std::filesystem::path& p) { saveImage(toImage(a), p); },
      py::arg("image"), py::arg("path"));
  m.def("distance_transform",
        [](const Array& mask) { return toArray(distanceTransform(contourFromMask(mask))); },
        py::arg("mask"), "Exact Euclidean distance to the nearest nonzero pixel.");

  py::class_<Graph>(m, "Graph")
      .def_property_readonly("nodes",
                             [](const Graph& g) { return points(g.coords(), g.dimension()); })
      .def_property_readonly("edges", [](const Graph& g) { return edgeArray(g.edges()); })
      .def_property_readonly("faces",
                             [](const Graph& g) {
                               py::array_t<std::int64_t> out({g.faceCount(), std::size_t{3}});
                               auto r = out.mutable_unchecked<2>();
                               for (std::size_t f = 0; f < g.faceCount(); ++f) {
                                 for (std::size_t i = 0; i < 3; ++i) {
                                   r(f, i) = std::int64_t(g.faces()[f].nodes[i]);
                                 }
                               }
                               return out;
                             })
      .def_property_readonly("node_count", &Graph::nodeCount)
      .def_property_readonly("edge_count", &Graph::edgeCount)
      .def_property_readonly("face_count", &Graph::faceCount)
      .def("to_json", [](const Graph& g) { return graphToJson(g).dump(); });

  m.def(
      "triangulation",
      [](std::size_t nodes, std::size_t width, std::size_t height) {
        return uniformTriangulation({nodes, {width, height}});
      },
      py::arg("nodes"), py::arg("width"), py::arg("height"),
      "Uniform lattice with round(sqrt(nodes))^2 nodes spanning the image.");

  py::class_<AdaptResult>(m, "Adapted")
      .def_readonly("graph", &AdaptResult::graph)
      .def_readonly("iterations", &AdaptResult::iterations)
      .def_readonly("intensity_norm", &AdaptResult::intensityNorm)
      .def_property_readonly("residual_history",
                             [](const AdaptResult& r) { return column(r.residualHistory); })
      .def_property_readonly("t_hat",
                             [](const AdaptResult& r) {
                               std::vector<double> v;
                               for (const auto& p : r.salientPoints) v.push_back(p.tHat);
                               return column(v);
                             })
      .def_property_readonly("saliency",
                             [](const AdaptResult& r) {
                               std::vector<double> v;
                               for (const auto& p : r.salientPoints) v.push_back(p.saliency);
                               return column(v);
                             })
      .def_property_readonly("node_saliency",
                             [](const AdaptResult& r) {
                               return column(nodeSaliency(r.graph, r.salientPoints));
                             })
      .def_static(
          "load", [](const std::filesystem::path& p) { return adaptedFromJson(readJsonFile(p)); },
          py::arg("path"), "Read an adapted graph written by `gridadapt adapt`.");

  m.def(
      "adapt",
      [](const Array& image, std::size_t nodes, const std::string& method, double lambda,
         std::size_t samples, std::optional<double> norm, std::size_t maxIterations,
         double residualThreshold, std::size_t threads) {
        const Image img = toImage(image);
        AdaptConfig cfg;
        cfg.detector.method = parseOr(parseMethod(method), "method", method);
        cfg.detector.lambda = lambda;
        cfg.detector.samplesPerEdge = samples;
        cfg.detector.intensityNorm = norm;
        cfg.maxIterations = maxIterations;
        cfg.residualThreshold = residualThreshold;
        cfg.threads = threads;
        cfg.validate();
        const Graph initial = uniformTriangulation({nodes, {img.width(), img.height()}});
        py::gil_scoped_release release;
        return adaptGraph(img, initial, cfg);
      },
      py::arg("image"), py::arg("nodes") = 100, py::arg("method") = "robust",
      py::arg("lam") = 0.4, py::arg("samples") = 0, py::arg("norm") = py::none(),
      py::arg("max_iterations") = 10, py::arg("residual_threshold") = 0.1,
      py::arg("threads") = 0,
      "Adapt a uniform triangulation to the image's salient points.");

  py::class_<DualGraph>(m, "Dual")
      .def_property_readonly("nodes",
                             [](const DualGraph& d) {
                               std::vector<double> flat;
                               for (const auto& n : d.nodes) {
                                 flat.insert(flat.end(), n.position.begin(), n.position.end());
                               }
                               return points(flat, 2);
                             })
      .def_property_readonly("edges", [](const DualGraph& d) { return edgeArray(d.edges); })
      .def_property_readonly("node_saliency",
                             [](const DualGraph& d) {
                               std::vector<double> v;
                               for (const auto& n : d.nodes) v.push_back(n.saliency);
                               return column(v);
                             })
      .def_property_readonly("edge_saliency",
                             [](const DualGraph& d) { return column(d.edgeSaliency); })
      .def_property_readonly("node_count", &DualGraph::nodeCount)
      .def_property_readonly("edge_count", &DualGraph::edgeCount)
      .def("filter", &filterBySaliency, py::arg("s_min"),
           "Nodes with saliency above s_min and the edges between them.")
      .def_static(
          "load", [](const std::filesystem::path& p) { return dualFromJson(readJsonFile(p)); },
          py::arg("path"));

  m.def(
      "dual",
      [](const AdaptResult& adapted, const std::string& pairing) {
        return buildDual(adapted, parseOr(parsePairing(pairing), "pairing", pairing));
      },
      py::arg("adapted"), py::arg("pairing") = "shared_face");

  m.def(
      "recall",
      [](const DualGraph& dual, const Array& contour, std::optional<double> sMin,
         std::optional<double> percentile, double dMin, const std::string& lookup) {
        if (sMin.has_value() == percentile.has_value()) {
          throw ParameterError("give exactly one of s_min and percentile");
        }
        const double threshold = sMin ? *sMin : saliencyPercentile(dual, *percentile);
        const EdtLookup mode = lookup == "nearest" ? EdtLookup::Nearest : EdtLookup::Bilinear;
        const RecallPoint p =
            recallAt(dual, distanceTransform(contourFromMask(contour)), threshold, dMin, mode);
        py::dict out;
        out["s_min"] = threshold;
        out["recall"] = p.recall ? py::cast(*p.recall) : py::none();
        out["total"] = p.totalCount;
        out["positive"] = p.positiveCount;
        return out;
      },
      py::arg("dual"), py::arg("contour"), py::arg("s_min") = py::none(),
      py::arg("percentile") = py::none(), py::arg("d_min") = 2.0, py::arg("lookup") = "bilinear",
      "Fraction of dual nodes above the saliency threshold lying within d_min of the contour.");

  m.def(
      "render_svg",
      [](const Array& image, const py::object& graph, const std::string& colormap,
         const std::string& background, double logLo, double logHi, double strokeWidth) {
        RenderSpec spec;
        spec.colormap = colormap == "hot" ? Colormap::FixedColorRange : Colormap::GrayLog2;
        spec.background = background == "white" ? Background::White : Background::Image;
        spec.logLo = logLo;
        spec.logHi = logHi;
        spec.strokeWidth = strokeWidth;
        EdgeSet edges;
        if (py::isinstance<DualGraph>(graph)) {
          edges = edgeSet(graph.cast<const DualGraph&>());
        } else if (py::isinstance<AdaptResult>(graph)) {
          const auto& r = graph.cast<const AdaptResult&>();
          edges = edgeSet(r.graph, &r.salientPoints);
        } else {
          edges = edgeSet(graph.cast<const Graph&>());
        }
        return renderSvg(toImage(image), edges, spec);
      },
      py::arg("image"), py::arg("graph"), py::arg("colormap") = "gray",
      py::arg("background") = "image", py::arg("log_lo") = -15.0, py::arg("log_hi") = 0.0,
      py::arg("stroke_width") = 1.0);

  m.def(
      "gdl_record",
      [](const AdaptResult& adapted, const Array& image, const std::string& features,
         const std::string& id, std::optional<int> label) {
        const auto f = parseOr(parseFeatures(features), "feature set", features);
        return gdlToJson(makeGdlRecord(adapted, toImage(image), f, id, label)).dump();
      },
      py::arg("adapted"), py::arg("image"), py::arg("features") = "both", py::arg("id") = "",
      py::arg("label") = py::none(), "One export record as a JSON string.");
  m.def(
      "export_gdl",
      [](const AdaptResult& adapted, const Array& image, const std::string& features,
         const std::filesystem::path& path, bool append, const std::string& id,
         std::optional<int> label) {
        const auto f = parseOr(parseFeatures(features), "feature set", features);
        exportGdl(adapted, toImage(image), f, path, append, id, label);
      },
      py::arg("adapted"), py::arg("image"), py::arg("features"), py::arg("path"),
      py::arg("append") = true, py::arg("id") = "", py::arg("label") = py::none());
}

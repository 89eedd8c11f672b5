#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <fstream>

#include "sketchsearch/error.hpp"
#include "sketchsearch/recognizer.hpp"
#include "sketchsearch/scorer.hpp"
#include "sketchsearch/screen_index.hpp"
#include "sketchsearch/synthetic.hpp"
#include "sketchsearch/tuner.hpp"

namespace py = pybind11;
namespace fs = std::filesystem;
using namespace sketchsearch;

namespace {

using PyStroke = std::vector<std::pair<double, double>>;

std::vector<RawStroke> to_strokes(const std::vector<PyStroke>& strokes) {
  std::vector<RawStroke> out;
  out.reserve(strokes.size());
  for (const auto& s : strokes) {
    RawStroke r;
    for (auto [x, y] : s) r.points.push_back({x, y});
    out.push_back(std::move(r));
  }
  return out;
}

Sketch to_sketch(const py::object& sketch) {
  if (py::isinstance<py::str>(sketch)) return parse_sketch(sketch.cast<std::string>());
  // A list of (class name, (x, y, w, h)) pairs.
  Sketch s;
  for (const auto& item : sketch) {
    const auto pair = item.cast<std::pair<std::string, std::array<double, 4>>>();
    const NormBBox box{pair.second[0], pair.second[1], pair.second[2], pair.second[3]};
    if (auto c = parse_element_class(pair.first)) {
      s = add_element(s, *c, box);
    } else if (auto d = parse_doodle_class(pair.first)) {
      s = add_element(s, *d, box);
    } else {
      throw Error(ErrorCode::UnknownClass, pair.first);
    }
  }
  return s;
}

std::vector<std::pair<std::string, double>> to_pairs(const std::vector<ScoredScreen>& results) {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& r : results) out.emplace_back(r.screen_id, r.score);
  return out;
}

ElementClass element_class(const std::string& name) {
  auto c = parse_element_class(name);
  if (!c) throw Error(ErrorCode::UnknownClass, name);
  return *c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sketch-based search over app screen layouts";

  auto error = py::register_exception<Error>(m, "SketchSearchError", PyExc_ValueError);
  (void)error;

  py::class_<Hyperparams>(m, "Hyperparams")
      .def(py::init<>())
      .def(py::init([](double p1, double p2, double p3, double delta_w, double c_w) {
             return Hyperparams{p1, p2, p3, delta_w, c_w};
           }),
           py::arg("p1"), py::arg("p2"), py::arg("p3"), py::arg("delta_w"), py::arg("c_w"))
      .def_readwrite("p1", &Hyperparams::p1)
      .def_readwrite("p2", &Hyperparams::p2)
      .def_readwrite("p3", &Hyperparams::p3)
      .def_readwrite("delta_w", &Hyperparams::delta_w)
      .def_readwrite("c_w", &Hyperparams::c_w)
      .def_static("parse", &parse_hyperparams)
      .def("__eq__", [](const Hyperparams& a, const Hyperparams& b) { return a == b; })
      .def("__repr__", [](const Hyperparams& hp) { return "Hyperparams(" + format_hyperparams(hp) + ")"; });

  m.def("doodle_classes", [] {
    std::vector<std::string> out;
    for (auto c : all_doodle_classes()) out.emplace_back(to_string(c));
    return out;
  });
  m.def("element_classes", [] {
    std::vector<std::string> out;
    for (auto c : all_element_classes()) out.emplace_back(to_string(c));
    return out;
  });

  m.def(
      "normalize_strokes",
      [](const std::vector<PyStroke>& strokes, std::pair<double, double> canvas) {
        const auto seq = normalize_strokes(to_strokes(strokes), {canvas.first, canvas.second});
        std::vector<std::tuple<double, double, int, int, int>> out;
        for (const auto& p : seq.points) out.emplace_back(p.dx, p.dy, p.pen_down, p.pen_up, p.done);
        return out;
      },
      py::arg("strokes"), py::arg("canvas"), "Stroke-5 rows (dx, dy, pen_down, pen_up, done).");

  py::class_<TemplateRecognizer>(m, "Recognizer")
      .def(py::init([](const fs::path& path) { return TemplateRecognizer(load_templates(path)); }),
           py::arg("templates"))
      .def(
          "classify",
          [](const TemplateRecognizer& r, const std::vector<PyStroke>& strokes, std::pair<double, double> canvas) {
            std::vector<std::pair<std::string, double>> out;
            const auto seq = normalize_strokes(to_strokes(strokes), {canvas.first, canvas.second});
            for (const auto& p : r.classify(seq)) out.emplace_back(to_string(p.klass), p.confidence);
            return out;
          },
          py::arg("strokes"), py::arg("canvas"), "All classes ranked by confidence.");

  m.def(
      "parse_sketch",
      [](const py::object& sketch) {
        std::vector<std::pair<std::string, std::tuple<double, double, double, double>>> out;
        for (const auto& e : to_sketch(sketch).elements) {
          out.push_back({std::string(to_string(e.klass)), {e.bbox.x, e.bbox.y, e.bbox.w, e.bbox.h}});
        }
        return out;
      },
      py::arg("sketch"), "Parses and merges a sketch; returns (class, bbox) pairs.");

  py::class_<ScreenIndex, std::shared_ptr<ScreenIndex>>(m, "Index")
      .def_static(
          "build",
          [](const fs::path& corpus_dir, const fs::path& rules) {
            return std::make_shared<ScreenIndex>(build_index(load_corpus_dir(corpus_dir), load_label_fix_rules(rules)));
          },
          py::arg("corpus_dir"), py::arg("rules"))
      .def_static("load", [](const fs::path& path) { return std::make_shared<ScreenIndex>(load_index(path)); })
      .def("save", [](const ScreenIndex& index, const fs::path& path) { save_index(index, path); })
      .def_property_readonly("screen_count", &ScreenIndex::screen_count)
      .def("screen_ids", &ScreenIndex::screen_ids)
      .def("df", [](const ScreenIndex& index, const std::string& c) { return index.df(element_class(c)); })
      .def("idf", [](const ScreenIndex& index, const std::string& c) { return index.idf(element_class(c)); })
      .def(
          "query",
          [](const ScreenIndex& index, const py::object& sketch, std::size_t top, const Hyperparams& hp) {
            const auto s = to_sketch(sketch);
            py::gil_scoped_release release;
            return to_pairs(score_screens(s, index, hp, top));
          },
          py::arg("sketch"), py::arg("top") = 10, py::arg("hp") = Hyperparams{},
          "Ranked (screen id, score) pairs for a sketch given as JSON text or (class, bbox) pairs.")
      .def("__len__", &ScreenIndex::screen_count)
      .def("__eq__", [](const ScreenIndex& a, const ScreenIndex& b) { return a == b; });

  m.def(
      "generate_corpus",
      [](std::uint64_t seed, std::size_t n, const fs::path& out, const std::string& profile) {
        const auto corpus = generate_synthetic_corpus(seed, n, parse_profile(profile));
        fs::create_directories(out / "screens");
        for (const auto& doc : corpus.docs) std::ofstream(out / "screens" / (doc.id + ".json")) << dump_screen_doc(doc);
        std::ofstream(out / "manifest.json") << dump_manifest(corpus);
        return corpus.docs.size();
      },
      py::arg("seed"), py::arg("n"), py::arg("out"), py::arg("profile") = "rico",
      "Writes screens/<id>.json plus manifest.json; returns the screen count.");

  m.def(
      "evaluate_search",
      [](const ScreenIndex& index, const fs::path& pairs, std::size_t k, const Hyperparams& hp) {
        const auto s = evaluate_search(load_eval_pairs(pairs), index, hp, k);
        return py::dict(py::arg("k") = s.k, py::arg("hits") = s.hits, py::arg("total") = s.total,
                        py::arg("accuracy") = s.accuracy, py::arg("ranks") = s.ranks);
      },
      py::arg("index"), py::arg("pairs"), py::arg("k") = 10, py::arg("hp") = Hyperparams{});

  m.def(
      "tune",
      [](const ScreenIndex& index, const fs::path& pairs, const fs::path& grid) {
        const auto result = grid_search(load_eval_pairs(pairs), index, load_grid(grid));
        return std::make_pair(result.best, format_tune_report(result));
      },
      py::arg("index"), py::arg("pairs"), py::arg("grid"), "Returns (best hyperparameters, report text).");
}

// Copyright 2026 The Bridgegram Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bridgegram/corpus.h"
#include "bridgegram/denorm.h"
#include "bridgegram/eval.h"
#include "bridgegram/model.h"
#include "bridgegram/normalize.h"

namespace py = pybind11;
namespace bg = bridgegram;

namespace {

std::vector<std::string> denormalize_tokens(const std::vector<std::string>& tokens,
                                            const bg::NormalizationDict& dict, double p_d,
                                            std::uint64_t seed) {
  bg::Rng rng(seed);
  return bg::denormalize_text(tokens, dict, p_d, rng);
}

std::vector<std::string> corrupt_tokens(const std::vector<std::string>& tokens, double p_j,
                                        double p_s, std::uint64_t seed) {
  bg::Rng rng(seed);
  return bg::corrupt_segmentation(tokens, p_j, p_s, rng);
}

}  // namespace

PYBIND11_MODULE(_bridgegram, m) {
  m.doc() = "Noise-resistant word embeddings with bridge-words";

  // Translators run newest first, so the subclass is registered last.
  py::register_exception<bg::Error>(m, "BridgegramError", PyExc_RuntimeError);
  py::register_exception<bg::OutOfVocabulary>(m, "OutOfVocabulary", PyExc_KeyError);

  m.def("tokenize", &bg::tokenize, py::arg("line"));
  m.def("normalize_word", &bg::normalize_word, py::arg("word"));
  m.def(
      "bridge_words", [](std::string_view w) { return bg::bridge_words(w).bridges; },
      py::arg("word"));
  m.def("char_ngrams", &bg::char_ngrams, py::arg("word"), py::arg("minn") = 3,
        py::arg("maxn") = 6);
  m.def("fnv1a32", &bg::fnv1a32, py::arg("s"));
  m.def(
      "cosine",
      [](const std::vector<float>& u, const std::vector<float>& v) { return bg::cosine(u, v); },
      py::arg("u"), py::arg("v"));
  m.def(
      "spearman",
      [](const std::vector<double>& x, const std::vector<double>& y) {
        return bg::spearman(x, y);
      },
      py::arg("x"), py::arg("y"));

  py::enum_<bg::Mode>(m, "Mode")
      .value("WORD_ONLY", bg::Mode::kWordOnly)
      .value("SUBWORD", bg::Mode::kSubword)
      .value("BRIDGE", bg::Mode::kBridge);

  py::class_<bg::TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("mode", &bg::TrainConfig::mode)
      .def_readwrite("dim", &bg::TrainConfig::dim)
      .def_readwrite("window", &bg::TrainConfig::window)
      .def_readwrite("epochs", &bg::TrainConfig::epochs)
      .def_readwrite("lr", &bg::TrainConfig::lr)
      .def_readwrite("negatives", &bg::TrainConfig::negatives)
      .def_readwrite("minn", &bg::TrainConfig::minn)
      .def_readwrite("maxn", &bg::TrainConfig::maxn)
      .def_readwrite("bucket", &bg::TrainConfig::bucket)
      .def_readwrite("min_count", &bg::TrainConfig::min_count)
      .def_readwrite("subsample_t", &bg::TrainConfig::subsample_t)
      .def_readwrite("p_b", &bg::TrainConfig::p_b)
      .def_readwrite("lam", &bg::TrainConfig::lambda)
      .def_readwrite("seed", &bg::TrainConfig::seed)
      .def_readwrite("threads", &bg::TrainConfig::threads)
      .def_readwrite("negative_table_size", &bg::TrainConfig::negative_table_size)
      .def("validate", &bg::TrainConfig::validate);

  py::class_<bg::TrainStats>(m, "TrainStats")
      .def_readonly("epoch_loss", &bg::TrainStats::epoch_loss)
      .def_readonly("word_pairs", &bg::TrainStats::word_pairs)
      .def_readonly("bridge_pairs", &bg::TrainStats::bridge_pairs)
      .def_readonly("tokens", &bg::TrainStats::tokens)
      .def_readonly("seconds", &bg::TrainStats::seconds);

  py::class_<bg::EmbeddingModel>(m, "Model")
      .def_static("load", py::overload_cast<const std::string&>(&bg::EmbeddingModel::load_binary),
                  py::arg("path"))
      .def("save", py::overload_cast<const std::string&>(&bg::EmbeddingModel::save_binary,
                                                         py::const_),
           py::arg("path"))
      .def("save_vectors",
           [](const bg::EmbeddingModel& model, const std::string& path) {
             bg::save_vectors(model, path);
           },
           py::arg("path"))
      .def_property_readonly("dim", &bg::EmbeddingModel::dim)
      .def_property_readonly("mode", &bg::EmbeddingModel::mode)
      .def_property_readonly("config", &bg::EmbeddingModel::config)
      .def_property_readonly("words",
                             [](const bg::EmbeddingModel& model) {
                               std::vector<std::string> out;
                               for (const auto& e : model.vocab().words()) out.push_back(e.word);
                               return out;
                             })
      .def("__contains__",
           [](const bg::EmbeddingModel& model, std::string_view w) {
             return model.vocab().contains(w);
           })
      .def("is_representable", &bg::EmbeddingModel::is_representable, py::arg("token"))
      .def("input_vector", &bg::EmbeddingModel::input_vector, py::arg("token"))
      .def(
          "similarity",
          [](const bg::EmbeddingModel& model, std::string_view a, std::string_view b) {
            return bg::cosine(model.input_vector(a), model.input_vector(b));
          },
          py::arg("a"), py::arg("b"))
      .def(
          "nearest_neighbors",
          [](const bg::EmbeddingModel& model, std::string_view q, std::size_t k) {
            return bg::nearest_neighbors(model, q, k);
          },
          py::arg("query"), py::arg("k") = 10);

  m.def(
      "train",
      [](const std::string& corpus, const bg::TrainConfig& config) {
        bg::TrainStats stats;
        py::gil_scoped_release release;
        auto model = bg::train(corpus, config, &stats);
        return std::make_pair(std::move(model), stats);
      },
      py::arg("corpus"), py::arg("config"),
      "Train on a corpus file; returns (model, stats).");

  py::class_<bg::NormalizationDict>(m, "NormalizationDict")
      .def_readonly("forward", &bg::NormalizationDict::forward)
      .def_readonly("reverse", &bg::NormalizationDict::reverse)
      .def_property_readonly("num_pairs", &bg::NormalizationDict::num_pairs);
  m.def(
      "load_dict", [](const std::vector<std::string>& paths) { return bg::load_dict(paths); },
      py::arg("paths"));
  m.def("denormalize_text", &denormalize_tokens, py::arg("tokens"), py::arg("dict"),
        py::arg("p_d"), py::arg("seed") = 1);
  m.def("corrupt_segmentation", &corrupt_tokens, py::arg("tokens"), py::arg("p_j") = 0.0,
        py::arg("p_s") = 0.0, py::arg("seed") = 1);
}

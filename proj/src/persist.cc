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

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "bridgegram/corpus.h"
#include "bridgegram/model.h"

namespace bridgegram {
namespace {

static_assert(std::endian::native == std::endian::little,
              "binary model I/O assumes a little-endian host");

constexpr char kMagic[4] = {'B', 'R', 'G', 'M'};
constexpr std::uint32_t kVersion = 1;

class BinaryWriter {
 public:
  explicit BinaryWriter(std::ostream& out) : out_(out) {}

  template <typename T>
  void put(T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    out_.write(reinterpret_cast<const char*>(&value), sizeof(T));
  }
  void put_string(const std::string& s) {
    put<std::uint32_t>(static_cast<std::uint32_t>(s.size()));
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }
  void put_matrix(const Matrix& m) {
    put<std::uint64_t>(m.rows());
    put<std::uint64_t>(m.cols());
    out_.write(reinterpret_cast<const char*>(m.data()),
               static_cast<std::streamsize>(m.size() * sizeof(float)));
  }

 private:
  std::ostream& out_;
};

class BinaryReader {
 public:
  BinaryReader(std::istream& in, const std::string& source)
      : in_(in), source_(source) {}

  template <typename T>
  T get() {
    T value;
    read(reinterpret_cast<char*>(&value), sizeof(T));
    return value;
  }
  std::string get_string() {
    const auto n = get<std::uint32_t>();
    if (n > (1u << 20)) fail("implausible string length");
    std::string s(n, '\0');
    read(s.data(), n);
    return s;
  }
  Matrix get_matrix() {
    const auto rows = get<std::uint64_t>();
    const auto cols = get<std::uint64_t>();
    if (cols == 0 || rows > (1ULL << 34) / cols) fail("implausible matrix shape");
    Matrix m(rows, cols);
    read(reinterpret_cast<char*>(m.data()), m.size() * sizeof(float));
    return m;
  }
  void read(char* dst, std::size_t n) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) fail("truncated model file");
  }
  [[noreturn]] void fail(const std::string& what) {
    throw Error(source_ + ": " + what);
  }

 private:
  std::istream& in_;
  const std::string& source_;
};

void write_config(BinaryWriter& w, const TrainConfig& c) {
  w.put<std::uint32_t>(static_cast<std::uint32_t>(c.mode));
  w.put<std::int32_t>(c.dim);
  w.put<std::int32_t>(c.window);
  w.put<std::int32_t>(c.epochs);
  w.put<double>(c.lr);
  w.put<std::int32_t>(c.negatives);
  w.put<std::int32_t>(c.minn);
  w.put<std::int32_t>(c.maxn);
  w.put<std::int64_t>(c.bucket);
  w.put<std::int32_t>(c.min_count);
  w.put<double>(c.subsample_t);
  w.put<double>(c.p_b);
  w.put<double>(c.lambda);
  w.put<std::uint64_t>(c.seed);
  w.put<std::int32_t>(c.threads);
  w.put<std::int64_t>(c.negative_table_size);
}

TrainConfig read_config(BinaryReader& r) {
  TrainConfig c;
  const auto mode = r.get<std::uint32_t>();
  if (mode > 2) r.fail("unknown mode tag");
  c.mode = static_cast<Mode>(mode);
  c.dim = r.get<std::int32_t>();
  c.window = r.get<std::int32_t>();
  c.epochs = r.get<std::int32_t>();
  c.lr = r.get<double>();
  c.negatives = r.get<std::int32_t>();
  c.minn = r.get<std::int32_t>();
  c.maxn = r.get<std::int32_t>();
  c.bucket = r.get<std::int64_t>();
  c.min_count = r.get<std::int32_t>();
  c.subsample_t = r.get<double>();
  c.p_b = r.get<double>();
  c.lambda = r.get<double>();
  c.seed = r.get<std::uint64_t>();
  c.threads = r.get<std::int32_t>();
  c.negative_table_size = r.get<std::int64_t>();
  return c;
}

void append_float(std::string& line, float v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  line.append(buf, res.ptr);
}

}  // namespace

void EmbeddingModel::save_binary(std::ostream& out) const {
  BinaryWriter w(out);
  out.write(kMagic, sizeof(kMagic));
  w.put<std::uint32_t>(kVersion);
  write_config(w, config_);
  w.put<std::uint64_t>(vocab_.size());
  for (const auto& e : vocab_.words()) {
    w.put_string(e.word);
    w.put<std::int64_t>(e.count);
  }
  w.put_matrix(input_);
  w.put_matrix(output_);
  if (!out) throw Error("write failed");
}

void EmbeddingModel::save_binary(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path);
  save_binary(out);
}

EmbeddingModel EmbeddingModel::load_binary(std::istream& in,
                                           const std::string& source) {
  BinaryReader r(in, source);
  char magic[4];
  r.read(magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) r.fail("bad magic");
  const auto version = r.get<std::uint32_t>();
  if (version != kVersion) {
    r.fail("unsupported model version " + std::to_string(version));
  }
  const TrainConfig config = read_config(r);
  config.validate();
  const auto n = r.get<std::uint64_t>();
  if (n == 0 || n > (1ULL << 31)) r.fail("implausible vocabulary size");
  std::vector<WordEntry> words(n);
  for (auto& e : words) {
    e.word = r.get_string();
    e.count = r.get<std::int64_t>();
  }
  Vocabulary vocab(std::move(words), config.vocabulary_options());
  Matrix input = r.get_matrix();
  Matrix output = r.get_matrix();
  return EmbeddingModel(std::move(vocab), config, std::move(input),
                        std::move(output));
}

EmbeddingModel EmbeddingModel::load_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model: " + path);
  return load_binary(in, path);
}

void save_vectors(const EmbeddingModel& model, std::ostream& out) {
  const auto& vocab = model.vocab();
  out << vocab.size() << ' ' << model.dim() << '\n';
  std::vector<float> v(model.dim());
  std::string line;
  for (std::size_t id = 0; id < vocab.size(); ++id) {
    model.average_rows(model.word_rows(static_cast<std::int32_t>(id)), v);
    line = vocab.word(static_cast<std::int32_t>(id));
    for (const float x : v) {
      line.push_back(' ');
      append_float(line, x);
    }
    line.push_back('\n');
    out << line;
  }
  if (!out) throw Error("write failed");
}

void save_vectors(const EmbeddingModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  save_vectors(model, out);
}

WordVectors load_vectors(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError(source, 1, "missing header");
  ++lineno;
  const auto header = tokenize(line);
  long long count = -1;
  long long dim = -1;
  if (header.size() == 2) {
    std::from_chars(header[0].data(), header[0].data() + header[0].size(), count);
    std::from_chars(header[1].data(), header[1].data() + header[1].size(), dim);
  }
  if (count < 0 || dim < 1) {
    throw ParseError(source, lineno, "header must be `<count> <dim>`");
  }

  WordVectors wv;
  wv.dim = static_cast<int>(dim);
  wv.vectors = Matrix(static_cast<std::size_t>(count), static_cast<std::size_t>(dim));
  wv.words.reserve(static_cast<std::size_t>(count));
  while (std::getline(in, line)) {
    ++lineno;
    const auto fields = tokenize(line);
    if (fields.empty()) continue;
    if (wv.words.size() == static_cast<std::size_t>(count)) {
      throw ParseError(source, lineno, "more vectors than the header declares");
    }
    if (fields.size() != static_cast<std::size_t>(dim) + 1) {
      throw ParseError(source, lineno,
                       "expected " + std::to_string(dim) + " values, got " +
                           std::to_string(fields.size() - 1));
    }
    auto row = wv.vectors.row(wv.words.size());
    for (long long i = 0; i < dim; ++i) {
      const auto& f = fields[i + 1];
      const auto res = std::from_chars(f.data(), f.data() + f.size(), row[i]);
      if (res.ec != std::errc() || res.ptr != f.data() + f.size()) {
        throw ParseError(source, lineno, "not a number: " + f);
      }
    }
    wv.words.push_back(fields[0]);
  }
  if (in.bad()) throw Error(source + ": read error");
  if (wv.words.size() != static_cast<std::size_t>(count)) {
    throw ParseError(source, lineno,
                     "header declares " + std::to_string(count) +
                         " vectors, found " + std::to_string(wv.words.size()));
  }
  return wv;
}

WordVectors load_vectors(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open vectors: " + path);
  return load_vectors(in, path);
}

}  // namespace bridgegram

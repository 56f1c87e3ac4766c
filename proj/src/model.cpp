#include "sdparse/model.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace sdparse {

namespace {

constexpr char kMagic[4] = {'D', 'F', 'R', 'G'};
constexpr std::uint32_t kVersion = 1;

// Little-endian scalar I/O. The artifact targets little-endian hosts; the
// byte-level writes below keep files identical even on a big-endian one.
template <typename T>
void put(std::ostream& os, T value) {
  unsigned char buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    buf[i] = static_cast<unsigned char>(
        (static_cast<std::uint64_t>(value) >> (8 * i)) & 0xff);
  }
  os.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  unsigned char buf[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(buf), sizeof(T))) {
    throw ModelError("model file truncated");
  }
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  }
  return static_cast<T>(v);
}

void put_f32(std::ostream& os, float value) {
  std::uint32_t bits;
  std::memcpy(&bits, &value, sizeof(bits));
  put<std::uint32_t>(os, bits);
}

float get_f32(std::istream& is) {
  const std::uint32_t bits = get<std::uint32_t>(is);
  float value;
  std::memcpy(&value, &bits, sizeof(value));
  return value;
}

void put_string(std::ostream& os, const std::string& s) {
  put<std::uint32_t>(os, static_cast<std::uint32_t>(s.size()));
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_string(std::istream& is) {
  const auto len = get<std::uint32_t>(is);
  std::string s(len, '\0');
  if (len != 0 && !is.read(s.data(), len)) {
    throw ModelError("model file truncated inside a string field");
  }
  return s;
}

}  // namespace

std::string to_string(ParserFamily family) {
  return family == ParserFamily::kGraph ? "graph" : "transition";
}

std::string to_string(DecoderKind decoder) {
  switch (decoder) {
    case DecoderKind::kProjective: return "proj";
    case DecoderKind::kNonProjective: return "nonproj";
    case DecoderKind::kSibling: return "sib";
    case DecoderKind::kSiblingGrandparent: return "sib-gp";
  }
  return "?";
}

double Model::dot(const FeatureVector& fv) const {
  double total = 0.0;
  for (const auto& [bucket, value] : fv.entries) {
    total += static_cast<double>(weights[static_cast<Eigen::Index>(bucket)]) *
             value;
  }
  return total;
}

double Model::dot_class(const FeatureVector& fv, std::uint32_t class_id) const {
  double total = 0.0;
  for (const auto& [bucket, value] : fv.entries) {
    const std::uint32_t b = remix_bucket(bucket, class_id, config.hash_bits);
    total += static_cast<double>(weights[static_cast<Eigen::Index>(b)]) * value;
  }
  return total;
}

void Model::validate() const {
  config.validate();
  if (labels.empty()) throw ModelError("model has an empty label inventory");
  if (weights.size() != static_cast<Eigen::Index>(config.bucket_count())) {
    throw ModelError("weight array size does not match 2^hash_bits");
  }
  if (!weights.allFinite()) throw ModelError("model weights are not finite");
}

double dot(const Eigen::VectorXd& weights, const FeatureVector& fv) {
  double total = 0.0;
  for (const auto& [bucket, value] : fv.entries) {
    total += weights[static_cast<Eigen::Index>(bucket)] * value;
  }
  return total;
}

double dot_class(const Eigen::VectorXd& weights, const FeatureVector& fv,
                 std::uint32_t class_id, int hash_bits) {
  double total = 0.0;
  for (const auto& [bucket, value] : fv.entries) {
    total += weights[static_cast<Eigen::Index>(
                remix_bucket(bucket, class_id, hash_bits))] *
             value;
  }
  return total;
}

std::uint32_t remix_bucket(std::uint32_t bucket, std::uint32_t class_id,
                           int hash_bits) {
  // splitmix-style finalizer over (bucket, class), masked to the table size.
  std::uint64_t x = (static_cast<std::uint64_t>(class_id) << 32) | bucket;
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return static_cast<std::uint32_t>(x & ((std::uint64_t{1} << hash_bits) - 1));
}

void save_model(const Model& model, std::ostream& os) {
  model.validate();
  os.write(kMagic, 4);
  put<std::uint32_t>(os, kVersion);
  put<std::uint8_t>(os, static_cast<std::uint8_t>(model.family));
  put<std::uint8_t>(os, static_cast<std::uint8_t>(model.decoder));
  put<std::int32_t>(os, model.config.hash_bits);
  put<std::uint8_t>(os, model.config.enable_clusters ? 1 : 0);
  put<std::uint8_t>(os, model.config.enable_second_order ? 1 : 0);
  put<std::uint8_t>(os, model.config.enable_stacking ? 1 : 0);
  put<std::int32_t>(os, model.config.distance_exact_max);
  put<std::int32_t>(os, model.config.distance_mid_max);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(model.labels.size()));
  for (const auto& label : model.labels) put_string(os, label);
  put<std::uint64_t>(os, static_cast<std::uint64_t>(model.weights.size()));
  for (Eigen::Index i = 0; i < model.weights.size(); ++i) {
    put_f32(os, model.weights[i]);
  }
  put<std::uint64_t>(os, model.corpus_fingerprint);
  put<std::uint32_t>(os, model.epochs);
  put<std::uint64_t>(os, model.seed);
  if (!os) throw IoError("failed writing model stream");
}

Model load_model(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
    throw ModelError("not a model file: bad magic bytes");
  }
  const auto version = get<std::uint32_t>(is);
  if (version != kVersion) {
    throw ModelError("unsupported model format version " +
                     std::to_string(version));
  }
  Model m;
  m.family = static_cast<ParserFamily>(get<std::uint8_t>(is));
  m.decoder = static_cast<DecoderKind>(get<std::uint8_t>(is));
  m.config.hash_bits = get<std::int32_t>(is);
  m.config.enable_clusters = get<std::uint8_t>(is) != 0;
  m.config.enable_second_order = get<std::uint8_t>(is) != 0;
  m.config.enable_stacking = get<std::uint8_t>(is) != 0;
  m.config.distance_exact_max = get<std::int32_t>(is);
  m.config.distance_mid_max = get<std::int32_t>(is);
  const auto label_count = get<std::uint32_t>(is);
  m.labels.reserve(label_count);
  for (std::uint32_t i = 0; i < label_count; ++i) {
    m.labels.push_back(get_string(is));
  }
  const auto weight_count = get<std::uint64_t>(is);
  m.weights.resize(static_cast<Eigen::Index>(weight_count));
  for (std::uint64_t i = 0; i < weight_count; ++i) {
    m.weights[static_cast<Eigen::Index>(i)] = get_f32(is);
  }
  m.corpus_fingerprint = get<std::uint64_t>(is);
  m.epochs = get<std::uint32_t>(is);
  m.seed = get<std::uint64_t>(is);
  m.validate();
  return m;
}

void save_model_file(const Model& model, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open model file for writing: " + path);
  save_model(model, os);
}

Model load_model_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open model file: " + path);
  return load_model(is);
}

std::string model_to_bytes(const Model& model) {
  std::ostringstream os(std::ios::binary);
  save_model(model, os);
  return os.str();
}

Model model_from_bytes(const std::string& bytes) {
  std::istringstream is(bytes, std::ios::binary);
  return load_model(is);
}

}  // namespace sdparse

#include "pdef/model_io.hpp"

#include <bit>
#include <fstream>
#include <istream>
#include <ostream>

namespace pdef {

namespace {

constexpr char kMagic[4] = {'P', 'D', 'G', 'M'};
constexpr std::uint32_t kMaxDim = 1u << 20;

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 4);
}

void put_f64(std::ostream& out, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 8);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw ShapeMismatch("model file truncated");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& in) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) throw ShapeMismatch("model file truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

std::uint32_t get_dim(std::istream& in) {
  const auto v = get_u32(in);
  if (v == 0 || v > kMaxDim) throw ShapeMismatch("model file has an implausible dimension");
  return v;
}

std::vector<int> get_sizes(std::istream& in) {
  const auto n = get_u32(in);
  if (n > 64) throw ShapeMismatch("model file has too many layers");
  std::vector<int> s;
  for (std::uint32_t i = 0; i < n; ++i) s.push_back(static_cast<int>(get_dim(in)));
  return s;
}

}  // namespace

void write_model(std::ostream& out, const GnnModel& model) {
  const auto& spec = model.spec();
  out.write(kMagic, 4);
  put_u32(out, kModelFormatVersion);
  put_u32(out, spec.input_dim);
  put_u32(out, static_cast<std::uint32_t>(spec.encoder.size()));
  for (int h : spec.encoder) put_u32(out, h);
  put_u32(out, static_cast<std::uint32_t>(spec.graph.size()));
  for (int h : spec.graph) put_u32(out, h);
  put_u32(out, spec.taps);
  put_u32(out, spec.output_dim);
  for (const auto* t : model.tensors()) {
    for (Eigen::Index i = 0; i < t->rows(); ++i)
      for (Eigen::Index j = 0; j < t->cols(); ++j) put_f64(out, (*t)(i, j));
  }
}

GnnModel read_model(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || !std::equal(magic, magic + 4, kMagic)) throw BadMagic("not a model file");
  const auto version = get_u32(in);
  if (version != kModelFormatVersion) {
    throw VersionMismatch("model format version " + std::to_string(version) + ", expected " +
                          std::to_string(kModelFormatVersion));
  }
  ModelSpec spec;
  spec.input_dim = static_cast<int>(get_dim(in));
  spec.encoder = get_sizes(in);
  spec.graph = get_sizes(in);
  if (spec.graph.empty()) throw ShapeMismatch("model file has no graph layers");
  const auto taps = get_u32(in);
  if (taps > 64) throw ShapeMismatch("model file has an implausible tap count");
  spec.taps = static_cast<int>(taps);
  spec.output_dim = static_cast<int>(get_dim(in));
  GnnModel model(spec);
  for (auto* t : model.tensors()) {
    for (Eigen::Index i = 0; i < t->rows(); ++i)
      for (Eigen::Index j = 0; j < t->cols(); ++j) (*t)(i, j) = get_f64(in);
  }
  if (in.peek() != std::char_traits<char>::eof()) throw ShapeMismatch("trailing bytes after model parameters");
  return model;
}

void save_model(const GnnModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_model(out, model);
  if (!out) throw std::runtime_error("failed writing " + path);
}

GnnModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_model(in);
}

}  // namespace pdef

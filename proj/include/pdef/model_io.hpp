#pragma once

// Checkpoint format (little-endian):
//   "PDGM"  u32 version
//   u32 input_dim, u32 n_enc, u32 enc[n_enc], u32 n_graph, u32 graph[n_graph],
//   u32 taps, u32 output_dim
//   f64 parameters, tensor by tensor in GnnModel::tensors() order, each
//   tensor row-major.

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "pdef/gnn.hpp"

namespace pdef {

inline constexpr std::uint32_t kModelFormatVersion = 1;

struct ModelFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BadMagic : ModelFormatError {
  using ModelFormatError::ModelFormatError;
};
struct VersionMismatch : ModelFormatError {
  using ModelFormatError::ModelFormatError;
};
struct ShapeMismatch : ModelFormatError {
  using ModelFormatError::ModelFormatError;
};

void write_model(std::ostream& out, const GnnModel& model);
GnnModel read_model(std::istream& in);

void save_model(const GnnModel& model, const std::string& path);
GnnModel load_model(const std::string& path);

}  // namespace pdef

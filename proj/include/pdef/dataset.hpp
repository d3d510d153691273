#pragma once

// Expert-labelled perception samples.
//
// File layout (little-endian):
//   header: "PDDS", u32 version, u32 N, u32 intruder_feats, u32 defender_feats,
//           u64 count
//   record (fixed stride), arrays indexed by player id:
//     u64 seed, f64 R, f64 t, u32 live defenders, u32 live intruders,
//     f64 defender xyz [N][3], u8 defender alive [N],
//     f64 intruder xyz [N][3], u8 intruder alive [N],
//     i32 slot intruder ids [N][intruder_feats]   (-1 = padding)
//     f64 features [N][3*intruder_feats + 3*defender_feats]
//     u8 adjacency [N][N]
//     i32 labels [N]   (slot index, -1 unassigned, -2 defender not alive)

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pdef/game.hpp"
#include "pdef/gnn.hpp"

namespace pdef {

inline constexpr std::uint32_t kDatasetVersion = 1;
inline constexpr int kUnassigned = -1;
inline constexpr int kAbsent = -2;

struct DatasetFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DatasetHeader {
  int team_size = 0;
  int intruder_feats = 0;
  int defender_feats = 0;
  std::uint64_t count = 0;

  int feature_dim() const { return 3 * intruder_feats + 3 * defender_feats; }
  std::size_t record_bytes() const;
};

struct Sample {
  std::uint64_t seed = 0;
  double radius = 1.0;
  GameState state;
  std::vector<std::vector<int>> slot_ids;  ///< [N][intruder_feats]
  Eigen::MatrixXd features;                ///< N x F, zero rows for dead defenders
  Eigen::MatrixXi adjacency;               ///< N x N, 0/1
  std::vector<int> labels;                 ///< per defender id
};

/// Perception and expert labels for one state.
Sample label_state(const GameState& state, const GameConfig& cfg, std::uint64_t seed);

/// Intruder id a stored label points at, or -1.
int decode_label(const Sample& s, int defender);

struct DataGenConfig {
  GameConfig game = GameConfig::for_team(kDefaultTeamSize);
  std::uint64_t count = 0;
  std::uint64_t seed = 1;
  double fresh_fraction = 0.5;
  int rollout_stride = 25;        ///< steps between recorded rollout states
  int rollout_states_per_game = 8;
};

/// Fresh samples come first, then rollout samples.
void generate_dataset(const DataGenConfig& cfg, std::ostream& out);
void generate_dataset(const DataGenConfig& cfg, const std::string& path);

void write_header(std::ostream& out, const DatasetHeader& h);
void write_sample(std::ostream& out, const DatasetHeader& h, const Sample& s);

/// Random access over a dataset file.
class DatasetReader {
 public:
  explicit DatasetReader(const std::string& path);
  const DatasetHeader& header() const { return header_; }
  std::uint64_t size() const { return header_.count; }
  Sample read(std::uint64_t index);

 private:
  std::unique_ptr<std::istream> in_;
  DatasetHeader header_;
  std::streamoff data_start_ = 0;
};

std::vector<Sample> read_dataset(const std::string& path);

/// One CSV row per (sample, defender): sample,defender,alive,label,label_intruder,f0..fF-1
void export_csv(const std::string& dataset_path, std::ostream& out);

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
};

/// Seeded permutation cut 60/20/20 (train and val sizes rounded down).
Split split_dataset(std::size_t count, std::uint64_t seed);

/// Training view of a sample: live defenders only.
struct GraphSample {
  Eigen::MatrixXd x;
  SparseGso s;
  std::vector<int> labels;
};

GraphSample to_graph(const Sample& sample, GsoNormalization norm);

}  // namespace pdef

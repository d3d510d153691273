#include "pdef/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "pdef/binary_io.hpp"
#include "pdef/perception.hpp"
#include "pdef/policies.hpp"

namespace pdef {

namespace {

constexpr char kMagic[4] = {'P', 'D', 'D', 'S'};
constexpr std::size_t kHeaderBytes = 4 + 4 * 4 + 8;

}  // namespace

std::size_t DatasetHeader::record_bytes() const {
  const std::size_t n = team_size;
  return 8 + 8 + 8 + 4 + 4 + 2 * (n * 3 * 8 + n) + n * intruder_feats * 4 + n * feature_dim() * 8 + n * n +
         n * 4;
}

Sample label_state(const GameState& state, const GameConfig& cfg, std::uint64_t seed) {
  const int n = static_cast<int>(state.defenders.size());
  Sample s;
  s.seed = seed;
  s.radius = cfg.radius;
  s.state = state;
  s.slot_ids.assign(n, std::vector<int>(cfg.intruder_feats, -1));
  s.features = Eigen::MatrixXd::Zero(n, raw_feature_dim(cfg));
  s.adjacency = Eigen::MatrixXi::Zero(n, n);
  s.labels.assign(n, kAbsent);

  const auto team = encode_perception(state, cfg);
  const auto match = expert_matching(build_payoffs(state, cfg));
  for (int k = 0; k < team.rows(); ++k) {
    const int id = team.defender_ids[k];
    const auto& local = team.local[k];
    std::copy(local.visible_ids.begin(), local.visible_ids.end(), s.slot_ids[id].begin());
    s.features.row(id) = team.features.row(k);
    const auto& target = match.assignment.target[id];
    s.labels[id] = target ? local.slot_of(*target) : kUnassigned;
    for (int l = 0; l < team.rows(); ++l) {
      s.adjacency(id, team.defender_ids[l]) = team.graph.adjacency(k, l) != 0.0;
    }
  }
  return s;
}

int decode_label(const Sample& s, int defender) {
  const int slot = s.labels[defender];
  return slot >= 0 ? s.slot_ids[defender][slot] : -1;
}

void write_header(std::ostream& out, const DatasetHeader& h) {
  bin::Writer w;
  w.raw(kMagic, 4);
  w.u32(kDatasetVersion);
  w.u32(h.team_size);
  w.u32(h.intruder_feats);
  w.u32(h.defender_feats);
  w.u64(h.count);
  out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
}

void write_sample(std::ostream& out, const DatasetHeader& h, const Sample& s) {
  const int n = h.team_size;
  if (static_cast<int>(s.state.defenders.size()) != n || static_cast<int>(s.state.intruders.size()) != n ||
      s.features.cols() != h.feature_dim()) {
    throw DatasetFormatError("sample does not match the dataset header");
  }
  bin::Writer w;
  w.u64(s.seed);
  w.f64(s.radius);
  w.f64(s.state.time);
  w.u32(s.state.live_defenders());
  w.u32(s.state.live_intruders());
  for (const auto* team : {&s.state.defenders, &s.state.intruders}) {
    for (const auto& p : *team)
      for (int c = 0; c < 3; ++c) w.f64(p.pos(c));
    for (const auto& p : *team) w.u8(p.alive ? 1 : 0);
  }
  for (const auto& row : s.slot_ids)
    for (int id : row) w.i32(id);
  for (int i = 0; i < n; ++i)
    for (int f = 0; f < h.feature_dim(); ++f) w.f64(s.features(i, f));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) w.u8(static_cast<std::uint8_t>(s.adjacency(i, j)));
  for (int l : s.labels) w.i32(l);
  out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
}

void generate_dataset(const DataGenConfig& cfg, std::ostream& out) {
  cfg.game.validate();
  DatasetHeader h{cfg.game.team_size, cfg.game.intruder_feats, cfg.game.defender_feats, cfg.count};
  write_header(out, h);
  const auto fresh = static_cast<std::uint64_t>(std::llround(static_cast<double>(cfg.count) * cfg.fresh_fraction));
  for (std::uint64_t i = 0; i < std::min(fresh, cfg.count); ++i) {
    GameConfig g = cfg.game;
    g.rng_seed = split_seed(cfg.seed, {0, i});
    write_sample(out, h, label_state(sample_initial_state(g), g, g.rng_seed));
  }
  std::uint64_t written = std::min(fresh, cfg.count);
  for (std::uint64_t game = 0; written < cfg.count; ++game) {
    GameConfig g = cfg.game;
    g.rng_seed = split_seed(cfg.seed, {1, game});
    GameState state = sample_initial_state(g);
    ExpertPolicy expert;
    AssignmentMap a;
    int taken = 0;
    for (std::int64_t k = 0; state.live_intruders() > 0 && k < g.max_steps; ++k) {
      if (k > 0 && k % cfg.rollout_stride == 0) {
        write_sample(out, h, label_state(state, g, g.rng_seed));
        if (++written == cfg.count || ++taken == cfg.rollout_states_per_game) break;
      }
      if (k % g.reassign_every == 0) a = expert.assign(state, g);
      state = step(std::move(state), g, a);
    }
  }
}

void generate_dataset(const DataGenConfig& cfg, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  generate_dataset(cfg, out);
  if (!out) throw std::runtime_error("failed writing " + path);
}

DatasetReader::DatasetReader(const std::string& path)
    : in_(std::make_unique<std::ifstream>(path, std::ios::binary)) {
  if (!*in_) throw std::runtime_error("cannot open " + path);
  std::string buf(kHeaderBytes, '\0');
  if (!in_->read(buf.data(), static_cast<std::streamsize>(buf.size()))) {
    throw DatasetFormatError("dataset header truncated");
  }
  bin::Reader r(buf);
  char magic[4];
  r.raw(magic, 4);
  if (!std::equal(magic, magic + 4, kMagic)) throw DatasetFormatError("not a dataset file");
  if (r.u32() != kDatasetVersion) throw DatasetFormatError("unsupported dataset version");
  header_.team_size = static_cast<int>(r.u32());
  header_.intruder_feats = static_cast<int>(r.u32());
  header_.defender_feats = static_cast<int>(r.u32());
  header_.count = r.u64();
  data_start_ = static_cast<std::streamoff>(kHeaderBytes);
  in_->seekg(0, std::ios::end);
  const auto bytes = static_cast<std::uint64_t>(in_->tellg());
  if (bytes != kHeaderBytes + header_.count * header_.record_bytes()) {
    throw DatasetFormatError("dataset size does not match its header");
  }
}

Sample DatasetReader::read(std::uint64_t index) {
  if (index >= header_.count) throw std::out_of_range("dataset index");
  const auto stride = header_.record_bytes();
  std::string buf(stride, '\0');
  in_->clear();
  in_->seekg(data_start_ + static_cast<std::streamoff>(index * stride));
  if (!in_->read(buf.data(), static_cast<std::streamsize>(stride))) throw DatasetFormatError("record truncated");
  bin::Reader r(buf);
  const int n = header_.team_size;
  Sample s;
  s.seed = r.u64();
  s.radius = r.f64();
  s.state.time = r.f64();
  r.u32();
  r.u32();
  for (auto* team : {&s.state.defenders, &s.state.intruders}) {
    team->resize(n);
    for (int i = 0; i < n; ++i) {
      (*team)[i].id = i;
      for (int c = 0; c < 3; ++c) (*team)[i].pos(c) = r.f64();
    }
    for (int i = 0; i < n; ++i) (*team)[i].alive = r.u8() != 0;
  }
  s.slot_ids.assign(n, std::vector<int>(header_.intruder_feats));
  for (auto& row : s.slot_ids)
    for (int& id : row) id = r.i32();
  s.features.resize(n, header_.feature_dim());
  for (int i = 0; i < n; ++i)
    for (int f = 0; f < header_.feature_dim(); ++f) s.features(i, f) = r.f64();
  s.adjacency.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s.adjacency(i, j) = r.u8();
  s.labels.resize(n);
  for (int& l : s.labels) l = r.i32();
  return s;
}

std::vector<Sample> read_dataset(const std::string& path) {
  DatasetReader reader(path);
  std::vector<Sample> out;
  out.reserve(reader.size());
  for (std::uint64_t i = 0; i < reader.size(); ++i) out.push_back(reader.read(i));
  return out;
}

void export_csv(const std::string& dataset_path, std::ostream& out) {
  DatasetReader reader(dataset_path);
  const int f = reader.header().feature_dim();
  out << "sample,defender,alive,label,label_intruder";
  for (int k = 0; k < f; ++k) out << ",f" << k;
  out << '\n';
  char num[32];
  for (std::uint64_t i = 0; i < reader.size(); ++i) {
    const auto s = reader.read(i);
    for (int d = 0; d < reader.header().team_size; ++d) {
      out << i << ',' << d << ',' << (s.state.defenders[d].alive ? 1 : 0) << ',' << s.labels[d] << ','
          << decode_label(s, d);
      for (int k = 0; k < f; ++k) {
        std::snprintf(num, sizeof num, "%.17g", s.features(d, k));
        out << ',' << num;
      }
      out << '\n';
    }
  }
}

Split split_dataset(std::size_t count, std::uint64_t seed) {
  std::vector<std::size_t> perm(count);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  for (std::size_t i = count; i > 1; --i) std::swap(perm[i - 1], perm[uniform_index(rng, i)]);
  const std::size_t n_train = count * 6 / 10;
  const std::size_t n_val = count * 2 / 10;
  Split s;
  s.train.assign(perm.begin(), perm.begin() + n_train);
  s.val.assign(perm.begin() + n_train, perm.begin() + n_train + n_val);
  s.test.assign(perm.begin() + n_train + n_val, perm.end());
  return s;
}

GraphSample to_graph(const Sample& sample, GsoNormalization norm) {
  std::vector<int> live;
  for (const auto& d : sample.state.defenders)
    if (d.alive) live.push_back(d.id);
  const int m = static_cast<int>(live.size());
  GraphSample g;
  g.x.resize(m, sample.features.cols());
  Eigen::MatrixXd adj(m, m);
  for (int a = 0; a < m; ++a) {
    g.x.row(a) = sample.features.row(live[a]);
    g.labels.push_back(sample.labels[live[a]]);
    for (int b = 0; b < m; ++b) adj(a, b) = sample.adjacency(live[a], live[b]);
  }
  g.s = normalize_gso(adj, norm).sparseView();
  return g;
}

}  // namespace pdef

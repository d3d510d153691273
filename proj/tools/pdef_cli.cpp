// Command-line front end: data generation, training, evaluation, single-game
// simulation, sweeps and plotting.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "pdef/dataset.hpp"
#include "pdef/experiment.hpp"
#include "pdef/model_io.hpp"
#include "pdef/report.hpp"
#include "pdef/training.hpp"

using namespace pdef;

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

struct EvalOptions {
  ExperimentSpec spec;
  std::string out;
  std::string summary;
  std::string plot;
};

void add_eval_options(CLI::App* app, EvalOptions& o) {
  app->add_option("--sizes", o.spec.team_sizes, "Team sizes")->delimiter(',');
  app->add_option("--trials", o.spec.trials, "Trials per team size");
  app->add_option("--algorithms", o.spec.algorithms, "Subset of expert,gnn,greedy,random,mlp")->delimiter(',');
  app->add_option("--gnn", o.spec.gnn_model, "Graph model checkpoint");
  app->add_option("--mlp", o.spec.mlp_model, "Per-node baseline checkpoint");
  app->add_option("--seed", o.spec.base_seed, "Base seed; trial seeds derive from it");
  app->add_option("--radius", o.spec.radius, "Perimeter radius override");
  app->add_option("--arena-radius", o.spec.arena_radius, "Intruder spawn radius override");
  app->add_option("--intruder-feats", o.spec.intruder_feats, "Intruder slots per defender");
  app->add_option("--sensing-range", o.spec.sensing_range, "Sensing range override");
  app->add_option("--expert-max-team", o.spec.expert_max_team, "Largest N the expert runs at without override");
  app->add_flag("--allow-large-expert", o.spec.allow_large_expert, "Run the expert beyond the size guard");
  app->add_option("--jobs", o.spec.jobs, "Worker threads (0 = all cores)");
  app->add_option("--out", o.out, "Metrics CSV path")->required();
  app->add_option("--summary", o.summary, "Summary table path");
  app->add_option("--plot", o.plot, "SVG plot path");
}

std::string label(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%g", v);
  return b;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hemisphere perimeter defense: simulation, expert matching and graph-network imitation"};
  app.set_config("--config", "", "key=value configuration file; flags override it");
  app.require_subcommand(1);

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "Generate an expert-labelled dataset");
  DataGenConfig gen_cfg;
  int gen_n = kDefaultTeamSize;
  int gen_feats = 10;
  std::string gen_out, gen_csv;
  gen->add_option("--out", gen_out, "Dataset path")->required();
  gen->add_option("--count", gen_cfg.count, "Number of samples")->required();
  gen->add_option("--seed", gen_cfg.seed, "Seed");
  gen->add_option("--team-size", gen_n, "Team size N");
  gen->add_option("--intruder-feats", gen_feats, "Intruder slots per defender");
  gen->add_option("--fresh-fraction", gen_cfg.fresh_fraction, "Share of freshly sampled states");
  gen->add_option("--rollout-stride", gen_cfg.rollout_stride, "Steps between recorded rollout states");
  gen->add_option("--rollout-states", gen_cfg.rollout_states_per_game, "Recorded states per rollout game");
  gen->add_option("--csv", gen_csv, "Also export the dataset as CSV");

  // train
  auto* tr = app.add_subcommand("train", "Train a graph model (or the per-node baseline)");
  TrainConfig tr_cfg;
  std::string tr_data, tr_out, tr_log, tr_arch = "gnn";
  tr->add_option("--data", tr_data, "Dataset path")->required();
  tr->add_option("--out", tr_out, "Checkpoint path")->required();
  tr->add_option("--log", tr_log, "Per-epoch metrics CSV");
  tr->add_option("--arch", tr_arch, "gnn or mlp")->check(CLI::IsMember({"gnn", "mlp"}));
  tr->add_option("--taps", tr_cfg.model.taps, "Graph filter taps K (gnn only)");
  tr->add_option("--epochs", tr_cfg.epochs, "Epochs");
  tr->add_option("--batch", tr_cfg.batch_size, "Samples per minibatch");
  tr->add_option("--seed", tr_cfg.seed, "Initialization and shuffle seed");
  tr->add_option("--split-seed", tr_cfg.split_seed, "Train/val/test split seed");
  tr->add_option("--lr0", tr_cfg.adam.lr0, "Initial learning rate");
  tr->add_option("--lr-min", tr_cfg.adam.lr_min, "Final learning rate");
  tr->add_option("--horizon", tr_cfg.adam.horizon_epochs, "Cosine schedule horizon in epochs");
  tr->add_option("--beta1", tr_cfg.adam.beta1, "Adam first-moment decay");

  // eval
  auto* ev = app.add_subcommand("eval", "Paired multi-algorithm evaluation");
  EvalOptions ev_opt;
  add_eval_options(ev, ev_opt);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run one game and dump its trajectory");
  int sim_n = kDefaultTeamSize, sim_stride = 1;
  std::uint64_t sim_seed = 1;
  std::string sim_alg = "expert", sim_model, sim_out;
  sim->add_option("--team-size", sim_n, "Team size N");
  sim->add_option("--seed", sim_seed, "Game seed");
  sim->add_option("--algorithm", sim_alg, "expert, gnn, greedy, random or mlp");
  sim->add_option("--model", sim_model, "Checkpoint for gnn/mlp");
  sim->add_option("--out", sim_out, "Trajectory log path")->required();
  sim->add_option("--stride", sim_stride, "Record every k-th step");

  // sweep
  auto* sw = app.add_subcommand("sweep", "Parameter sweep (radius, sensing, demos)");
  EvalOptions sw_opt;
  std::string sw_kind = "radius";
  std::vector<double> sw_radii{1, 2, 3, 4, 5, 6, 7, 8};
  int sw_n = 40;
  std::vector<std::string> sw_models;
  sw->add_option("--kind", sw_kind, "radius, sensing or demos")->check(CLI::IsMember({"radius", "sensing", "demos"}));
  sw->add_option("--radii", sw_radii, "Radii for the radius sweep")->delimiter(',');
  sw->add_option("--n", sw_n, "Team size for the radius sweep");
  sw->add_option("--models", sw_models, "value:gnn_path:mlp_path entries for sensing/demos sweeps")->delimiter(',');
  add_eval_options(sw, sw_opt);

  // plot
  auto* pl = app.add_subcommand("plot", "Render a metrics or sweep CSV as SVG");
  std::string pl_in, pl_out, pl_title;
  pl->add_option("--in", pl_in, "Metrics or sweep CSV")->required();
  pl->add_option("--out", pl_out, "SVG path")->required();
  pl->add_option("--title", pl_title, "Plot title");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      gen_cfg.game = GameConfig::for_team(gen_n);
      gen_cfg.game.intruder_feats = gen_feats;
      generate_dataset(gen_cfg, gen_out);
      if (!gen_csv.empty()) {
        auto out = open_out(gen_csv);
        export_csv(gen_out, out);
      }
      std::cout << "wrote " << gen_cfg.count << " samples to " << gen_out << "\n";
    } else if (*tr) {
      if (tr_arch == "mlp") tr_cfg.model.taps = 0;
      std::ofstream log;
      if (!tr_log.empty()) log = open_out(tr_log);
      const auto r = train_from_file(tr_data, tr_cfg, tr_log.empty() ? nullptr : &log);
      save_model(r.model, tr_out);
      std::printf("best epoch %d, test loss %.4f, test acc %.4f, %.1f s\n", r.report.best_epoch, r.report.test_loss,
                  r.report.test_acc, r.report.wall_seconds);
    } else if (*ev) {
      const auto rows = run_experiment(ev_opt.spec);
      auto out = open_out(ev_opt.out);
      write_metrics_csv(out, rows);
      if (!ev_opt.summary.empty()) {
        auto s = open_out(ev_opt.summary);
        write_summary(s, rows);
      }
      if (!ev_opt.plot.empty()) {
        auto s = open_out(ev_opt.plot);
        write_svg_plot(s, {"Capture percentage vs team size", "N", "captures / N"}, accuracy_series(rows));
      }
      write_summary(std::cout, rows);
    } else if (*sim) {
      GameConfig cfg = GameConfig::for_team(sim_n, sim_seed);
      ModelSet models;
      if (sim_alg == "gnn" || sim_alg == "mlp") models[sim_alg] = std::make_shared<const GnnModel>(load_model(sim_model));
      auto policy = make_policy(sim_alg, models, sim_seed);
      auto out = open_out(sim_out);
      TrajectoryLog log(out, sim_stride);
      log.header(cfg);
      const auto r = run_game(cfg, *policy, &log);
      std::printf("captures %d, intrusions %d, terminal time %.3f\n", r.captures, r.intrusions, r.terminal_time);
    } else if (*sw) {
      std::vector<SweepPoint> points;
      if (sw_kind == "radius") {
        points = radius_sweep(sw_opt.spec, sw_radii, sw_n);
      } else {
        std::map<long, std::pair<std::string, std::string>> models;
        for (const auto& m : sw_models) {
          std::stringstream ss(m);
          std::string v, g, p;
          std::getline(ss, v, ':');
          std::getline(ss, g, ':');
          std::getline(ss, p, ':');
          models[std::stol(v)] = {g, p};
        }
        if (sw_kind == "sensing") {
          std::map<int, std::pair<std::string, std::string>> by_feats;
          for (const auto& [k, v] : models) by_feats[static_cast<int>(k)] = v;
          points = sensing_sweep(sw_opt.spec, by_feats);
        } else {
          points = demos_sweep(sw_opt.spec, models);
        }
      }
      const auto rows = run_sweep(points);
      auto out = open_out(sw_opt.out);
      write_sweep_csv(out, rows);
      if (!sw_opt.plot.empty()) {
        auto s = open_out(sw_opt.plot);
        write_svg_plot(s, {"Capture percentage vs " + sw_kind, sw_kind, "captures / N"}, sweep_series(rows));
      }
      for (const auto& s : sweep_series(rows)) {
        std::cout << s.name;
        for (std::size_t k = 0; k < s.x.size(); ++k) std::cout << ' ' << label(s.x[k]) << ':' << label(s.y[k]);
        std::cout << '\n';
      }
    } else if (*pl) {
      std::ifstream in(pl_in);
      if (!in) throw std::runtime_error("cannot open " + pl_in);
      std::string first;
      std::getline(in, first);
      in.seekg(0);
      auto out = open_out(pl_out);
      if (first == kSweepSchema) {
        const auto rows = read_sweep_csv(in);
        const std::string x = rows.empty() ? "value" : rows.front().parameter;
        write_svg_plot(out, {pl_title.empty() ? "Capture percentage vs " + x : pl_title, x, "captures / N"},
                       sweep_series(rows));
      } else {
        write_svg_plot(out, {pl_title.empty() ? "Capture percentage vs team size" : pl_title, "N", "captures / N"},
                       accuracy_series(read_metrics_csv(in)));
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

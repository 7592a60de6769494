// Command-line front end: generates or loads a plant, sweeps the sparsity
// weight, and serializes the per-gamma records, trade-off table, sparsity
// patterns and polished gains.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sparsegain/errors.hpp"
#include "sparsegain/io.hpp"
#include "sparsegain/linalg.hpp"
#include "sparsegain/model.hpp"
#include "sparsegain/path.hpp"
#include "sparsegain/problems.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace sparsegain;

namespace {

constexpr const char* kVersion = "0.1.0";

struct CommonOptions {
  std::string penalty;  // empty: per-command default
  std::vector<double> gamma_list;
  double gamma_min = 0.0;  // 0 means "use the per-problem default"
  double gamma_max = 0.0;
  int gamma_steps = 50;
  double rho = 100.0;
  double eps = 1e-4;
  int max_iter = 1000;
  bool no_reweight = false;
  std::string blocks;  // "r1,r2,...xc1,c2,..."
  std::uint64_t seed = 1;
  std::string out_dir;
};

void add_common_flags(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--penalty", opt.penalty, "Penalty: wl1|card|slog|blk-wl1|blk-card|blk-slog")
      ->check(CLI::IsMember({"wl1", "card", "slog", "blk-wl1", "blk-card", "blk-slog"}));
  cmd->add_option("--gamma", opt.gamma_list, "Explicit gamma grid (strictly increasing)");
  cmd->add_option("--gamma-min", opt.gamma_min, "Smallest gamma of the log-spaced grid");
  cmd->add_option("--gamma-max", opt.gamma_max, "Largest gamma of the log-spaced grid");
  cmd->add_option("--gamma-steps", opt.gamma_steps, "Number of grid points");
  cmd->add_option("--rho", opt.rho, "ADMM augmented Lagrangian weight");
  cmd->add_option("--eps", opt.eps, "ADMM stopping tolerance");
  cmd->add_option("--max-iter", opt.max_iter, "ADMM iteration cap");
  cmd->add_flag("--no-reweight", opt.no_reweight, "Keep the initial weights along the path");
  cmd->add_option("--blocks", opt.blocks,
                  "Block partition as <row sizes>x<col sizes>, e.g. 1,1,1x3,3,3");
  cmd->add_option("--seed", opt.seed, "Random seed (network demo)");
  cmd->add_option("--out", opt.out_dir, "Output directory");
}

std::vector<int> parse_size_list(const std::string& text) {
  std::vector<int> sizes;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next = text.find(',', pos);
    if (next == std::string::npos) next = text.size();
    sizes.push_back(std::stoi(text.substr(pos, next - pos)));
    pos = next + 1;
  }
  return sizes;
}

std::optional<BlockPartition> parse_blocks(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const std::size_t x = text.find('x');
  if (x == std::string::npos)
    throw ParseError("--blocks expects <row sizes>x<col sizes>", 1, 1);
  BlockPartition part;
  part.row_sizes = parse_size_list(text.substr(0, x));
  part.col_sizes = parse_size_list(text.substr(x + 1));
  return part;
}

PenaltySpec make_penalty(const std::string& name, std::optional<BlockPartition> blocks) {
  PenaltyKind kind;
  const bool blockwise = name.rfind("blk-", 0) == 0;
  const std::string base = blockwise ? name.substr(4) : name;
  if (base == "wl1")
    kind = PenaltyKind::WeightedL1;
  else if (base == "card")
    kind = PenaltyKind::Cardinality;
  else if (base == "slog")
    kind = PenaltyKind::SumOfLogs;
  else
    throw ParseError("unknown penalty '" + name + "'", 1, 1);
  if (blockwise) {
    if (!blocks)
      throw ParseError("penalty '" + name + "' needs a block partition (--blocks)", 1, 1);
    return PenaltySpec::blockwise(kind, *blocks);
  }
  return PenaltySpec::elementwise(kind);
}

std::vector<double> build_grid(const CommonOptions& opt, double default_min, double default_max) {
  if (!opt.gamma_list.empty()) {
    std::vector<double> grid;
    for (double g : opt.gamma_list)
      if (g > 0.0) grid.push_back(g);  // gamma = 0 is always the base record
    for (std::size_t k = 1; k < grid.size(); ++k)
      if (grid[k] <= grid[k - 1]) throw ParseError("--gamma grid must be strictly increasing", 1, 1);
    return grid;
  }
  const double lo = opt.gamma_min > 0.0 ? opt.gamma_min : default_min;
  const double hi = opt.gamma_max > 0.0 ? opt.gamma_max : default_max;
  return log_spaced(lo, hi, opt.gamma_steps);
}

fs::path resolve_out_dir(const CommonOptions& opt, const std::string& fallback) {
  if (!opt.out_dir.empty()) return opt.out_dir;
  if (const char* env = std::getenv("SPARSEGAIN_OUT")) return fs::path(env) / fallback;
  return fs::path(fallback);
}

ordered_json options_json(const CommonOptions& opt, const std::vector<double>& grid) {
  ordered_json j;
  j["penalty"] = opt.penalty;
  ordered_json g = ordered_json::array();
  for (double v : grid) g.push_back(v);
  j["gamma_grid"] = std::move(g);
  j["rho"] = opt.rho;
  j["eps"] = opt.eps;
  j["max_iter"] = opt.max_iter;
  j["reweight"] = !opt.no_reweight;
  j["blocks"] = opt.blocks;
  j["seed"] = opt.seed;
  return j;
}

void write_outputs(const fs::path& dir, const ordered_json& manifest, const Plant& plant,
                   const std::vector<GammaRecord>& records,
                   const std::optional<BlockPartition>& blocks) {
  fs::create_directories(dir);
  fs::create_directories(dir / "patterns");
  fs::create_directories(dir / "gains");
  atomic_write(dir / "manifest.json", manifest.dump(2) + "\n");
  write_plant_file(dir / "plant.txt", plant);
  atomic_write(dir / "records.jsonl", render_records_jsonl(records));
  atomic_write(dir / "tradeoff.csv", render_tradeoff_csv(records));
  char name[32];
  for (std::size_t k = 0; k < records.size(); ++k) {
    std::snprintf(name, sizeof(name), "%03zu.txt", k);
    atomic_write(dir / "patterns" / name, render_pattern(records[k].mask, blocks));
    write_matrix_file(dir / "gains" / name, "F", records[k].f_polished);
  }
}

int run_pipeline(const Plant& plant, const std::optional<BlockPartition>& blocks,
                 const CommonOptions& opt, const std::vector<double>& grid,
                 ordered_json manifest, const fs::path& out_dir) {
  validate(plant);
  PenaltySpec spec = make_penalty(opt.penalty, blocks);

  PathOptions popts;
  popts.gamma_grid = grid;
  popts.reweighting = !opt.no_reweight && spec.kind == PenaltyKind::WeightedL1;

  AdmmOptions aopts;
  aopts.rho = opt.rho;
  aopts.eps_stop = opt.eps;
  aopts.max_iter = opt.max_iter;

  const std::vector<GammaRecord> records = run_path(plant, spec, popts, aopts);
  write_outputs(out_dir, manifest, plant, records, spec.blocks);
  std::cout << "wrote " << records.size() << " records to " << out_dir.string() << "\n";
  return 0;
}

int cmd_demo(const std::string& name, int n, double r_scale, const CommonOptions& opt) {
  Plant plant;
  std::optional<BlockPartition> blocks = parse_blocks(opt.blocks);
  double default_min = 1e-4, default_max = 1e-1;
  CommonOptions effective = opt;

  if (name == "mass-spring") {
    plant = mass_spring(n, r_scale);
    if (effective.penalty.empty()) effective.penalty = "wl1";
  } else if (name == "network") {
    NetworkPlant net = random_network(n, 10.0, opt.seed);
    plant = net.plant;
    if (effective.penalty.empty()) effective.penalty = "wl1";
    default_min = 1e-1;
    default_max = 70.0;
  } else if (name == "biochem") {
    BiochemProblem prob = biochemical();
    plant = prob.plant;
    if (!blocks) blocks = prob.partition;
    if (effective.penalty.empty()) effective.penalty = "blk-wl1";
    default_min = 1e-2;
    default_max = 4.0;
  } else {
    std::cerr << "unknown demo '" << name << "' (expected mass-spring|network|biochem)\n";
    return 2;
  }

  // For demos a single --gamma value means "sweep up to that value".
  if (effective.gamma_list.size() == 1) {
    effective.gamma_max = effective.gamma_list.front();
    effective.gamma_list.clear();
  }
  const std::vector<double> grid = build_grid(effective, default_min, default_max);

  ordered_json manifest;
  manifest["tool"] = "sparsegain";
  manifest["version"] = kVersion;
  manifest["command"] = "demo";
  manifest["problem"] = name;
  manifest["n"] = n;
  manifest["r_scale"] = r_scale;
  manifest["options"] = options_json(effective, grid);

  const fs::path out_dir = resolve_out_dir(opt, "sparsegain-" + name);
  return run_pipeline(plant, blocks, effective, grid, manifest, out_dir);
}

int cmd_solve(const std::string& plant_file, const CommonOptions& opt_in) {
  CommonOptions opt = opt_in;
  if (opt.penalty.empty()) opt.penalty = "wl1";
  const Plant plant = read_plant_file(plant_file);
  const std::optional<BlockPartition> blocks = parse_blocks(opt.blocks);
  const std::vector<double> grid = build_grid(opt, 1e-4, 1.0);

  ordered_json manifest;
  manifest["tool"] = "sparsegain";
  manifest["version"] = kVersion;
  manifest["command"] = "solve";
  manifest["plant_file"] = plant_file;
  manifest["options"] = options_json(opt, grid);

  const fs::path out_dir = resolve_out_dir(opt, "sparsegain-solve");
  return run_pipeline(plant, blocks, opt, grid, manifest, out_dir);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse and block-sparse H2 state-feedback gain design"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string demo_name;
  int demo_n = 50;
  double demo_r_scale = 10.0;
  CommonOptions demo_opt;
  CLI::App* demo = app.add_subcommand("demo", "Run one of the built-in example problems");
  demo->add_option("name", demo_name, "mass-spring | network | biochem")->required();
  demo->add_option("--n", demo_n, "Problem size (masses or nodes)");
  demo->add_option("--r-scale", demo_r_scale, "Control weight scale (mass-spring)");
  add_common_flags(demo, demo_opt);

  std::string plant_file;
  CommonOptions solve_opt;
  CLI::App* solve = app.add_subcommand("solve", "Run the pipeline on a plant file");
  solve->add_option("plant", plant_file, "Plant file (matrix stanzas A, B1, B2, Q, R)")
      ->required();
  add_common_flags(solve, solve_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return 2;
  }

  try {
    if (demo->parsed()) return cmd_demo(demo_name, demo_n, demo_r_scale, demo_opt);
    return cmd_solve(plant_file, solve_opt);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DefinitenessError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SynthesisError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}

#pragma once

#include <string>
#include <vector>

#include "sparsegain/admm.hpp"
#include "sparsegain/matrix.hpp"
#include "sparsegain/model.hpp"
#include "sparsegain/polish.hpp"

namespace sparsegain {

/// Strictly increasing geometric grid with the endpoints included.
std::vector<double> log_spaced(double lo, double hi, int count);

struct PathOptions {
  std::vector<double> gamma_grid;  // strictly increasing, all positive
  bool reweighting = true;         // refresh weights from the previous solution
  double reweight_eps = 1e-3;
  PolishOptions polish;
};

enum class RecordStatus {
  Ok,
  AdmmIterLimit,    // ADMM stopped at the iteration cap
  MaskUnstable,     // sparse iterate not stabilizing; kept the dense one
  PolishIncomplete  // polishing returned its best iterate without converging
};

std::string to_string(RecordStatus status);

/// Per-γ solution bundle. Record 0 of a path is the centralized base point.
struct GammaRecord {
  double gamma = 0.0;
  GainMatrix f_identified;
  StructureMask mask;
  int nnz = 0;
  int nnz_blocks = 0;
  double j_identified = 0.0;
  GainMatrix f_polished;
  double j_polished = 0.0;
  int admm_iters = 0;
  RecordStatus status = RecordStatus::Ok;
  CertificateReport certificate;
};

/// Sweep the γ grid: reweight from the previous solution, run ADMM warm
/// started from the previous identified gain, freeze the identified pattern
/// and polish on it. Record 0 is the Riccati (centralized) solution.
std::vector<GammaRecord> run_path(const Plant& plant, const PenaltySpec& spec,
                                  const PathOptions& popts, const AdmmOptions& aopts);

/// Reweighting rule: W = 1 / (|entry| + ε), or 1 / (‖block‖_F + ε) blockwise.
PenaltySpec update_weights(const GainMatrix& prev_f, const PenaltySpec& spec);

}  // namespace sparsegain

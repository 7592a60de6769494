#include "sparsegain/path.hpp"

#include <cmath>

#include "sparsegain/errors.hpp"
#include "sparsegain/h2.hpp"
#include "sparsegain/linalg.hpp"

namespace sparsegain {

std::vector<double> log_spaced(double lo, double hi, int count) {
  if (lo <= 0.0 || hi <= lo) throw DefinitenessError("log_spaced: need 0 < lo < hi");
  if (count < 1) throw DimensionError("log_spaced: need at least one point");
  std::vector<double> grid(count);
  if (count == 1) {
    grid[0] = hi;
    return grid;
  }
  const double llo = std::log10(lo), lhi = std::log10(hi);
  for (int k = 0; k < count; ++k)
    grid[k] = std::pow(10.0, llo + (lhi - llo) * k / (count - 1));
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

std::string to_string(RecordStatus status) {
  switch (status) {
    case RecordStatus::Ok:
      return "ok";
    case RecordStatus::AdmmIterLimit:
      return "admm-iter-limit";
    case RecordStatus::MaskUnstable:
      return "mask-unstable";
    case RecordStatus::PolishIncomplete:
      return "polish-incomplete";
  }
  return "unknown";
}

PenaltySpec update_weights(const GainMatrix& prev_f, const PenaltySpec& spec) {
  if (spec.kind != PenaltyKind::WeightedL1)
    throw Error("update_weights: reweighting applies to the weighted l1 penalty only");
  if (spec.epsilon_reweight <= 0.0)
    throw DefinitenessError("update_weights: epsilon_reweight must be positive");
  PenaltySpec out = spec;
  const double eps = spec.epsilon_reweight;
  if (!spec.blockwise()) {
    out.weights = Matrix(prev_f.rows(), prev_f.cols());
    for (int i = 0; i < prev_f.rows(); ++i)
      for (int j = 0; j < prev_f.cols(); ++j)
        out.weights(i, j) = 1.0 / (std::abs(prev_f(i, j)) + eps);
    return out;
  }
  const BlockPartition& part = *spec.blocks;
  part.validate(prev_f.rows(), prev_f.cols());
  out.weights = Matrix(part.num_block_rows(), part.num_block_cols());
  int i0 = 0;
  for (int bi = 0; bi < part.num_block_rows(); ++bi) {
    int j0 = 0;
    for (int bj = 0; bj < part.num_block_cols(); ++bj) {
      const double norm =
          prev_f.block(i0, j0, part.row_sizes[bi], part.col_sizes[bj]).frobenius_norm();
      out.weights(bi, bj) = 1.0 / (norm + eps);
      j0 += part.col_sizes[bj];
    }
    i0 += part.row_sizes[bi];
  }
  return out;
}

namespace {

GammaRecord centralized_record(const Plant& plant, const PenaltySpec& spec,
                               const AreSolution& are) {
  GammaRecord rec;
  rec.gamma = 0.0;
  rec.f_identified = are.gain;
  const CardinalityReport card = cardinality_report(are.gain, spec.blocks);
  rec.mask = card.mask;
  rec.nnz = card.nnz;
  rec.nnz_blocks = card.nnz_blocks;
  rec.j_identified = objective(plant, are.gain);
  rec.f_polished = are.gain;
  rec.j_polished = rec.j_identified;
  rec.admm_iters = 0;
  rec.status = RecordStatus::Ok;
  rec.certificate.primal = 0.0;
  rec.certificate.stationarity = gradient(plant, are.gain).frobenius_norm();
  rec.certificate.subdiff = 0.0;
  return rec;
}

}  // namespace

std::vector<GammaRecord> run_path(const Plant& plant, const PenaltySpec& spec,
                                  const PathOptions& popts, const AdmmOptions& aopts) {
  validate(plant);
  for (std::size_t k = 0; k < popts.gamma_grid.size(); ++k) {
    if (popts.gamma_grid[k] <= 0.0)
      throw DefinitenessError("run_path: grid values must be positive");
    if (k > 0 && popts.gamma_grid[k] <= popts.gamma_grid[k - 1])
      throw DefinitenessError("run_path: grid must be strictly increasing");
  }

  const AreSolution are = solve_are(plant);
  std::vector<GammaRecord> records;
  records.reserve(popts.gamma_grid.size() + 1);
  records.push_back(centralized_record(plant, spec, are));

  PenaltySpec current = spec;
  current.epsilon_reweight = popts.reweight_eps;
  GainMatrix f_prev = are.gain;

  for (double gamma : popts.gamma_grid) {
    if (popts.reweighting && current.kind == PenaltyKind::WeightedL1)
      current = update_weights(f_prev, current);

    const AdmmState st = admm_solve(plant, gamma, current, f_prev, aopts);

    GammaRecord rec;
    rec.gamma = gamma;
    rec.admm_iters = st.iters;
    rec.status =
        (st.status == SolveStatus::Converged) ? RecordStatus::Ok : RecordStatus::AdmmIterLimit;
    rec.certificate = critical_point_certificate(plant, st, gamma, current);

    // The sparse iterate G carries the identified pattern; fall back to the
    // projected (then raw) F iterate if G fails to stabilize.
    CardinalityReport card = cardinality_report(st.g, current.blocks);
    GainMatrix f_id = project_structure(st.g, card.mask);
    if (spectral_abscissa(plant.a - plant.b2 * f_id) >= 0.0) {
      f_id = project_structure(st.f, card.mask);
      if (spectral_abscissa(plant.a - plant.b2 * f_id) >= 0.0) {
        card = cardinality_report(st.f, current.blocks);
        f_id = project_structure(st.f, card.mask);
        rec.status = RecordStatus::MaskUnstable;
        if (spectral_abscissa(plant.a - plant.b2 * f_id) >= 0.0) {
          card.mask.mask = Matrix(st.f.rows(), st.f.cols());
          card.mask.mask.fill(1.0);
          f_id = st.f;
        }
      }
    }
    rec.mask = card.mask;
    rec.nnz = card.nnz;
    rec.nnz_blocks = card.nnz_blocks;
    rec.f_identified = f_id;
    rec.j_identified = objective(plant, f_id);

    const PolishResult pol = polish_gain(plant, rec.mask, f_id, popts.polish);
    rec.f_polished = pol.f;
    rec.j_polished = pol.j;
    if (!pol.converged && rec.status == RecordStatus::Ok)
      rec.status = RecordStatus::PolishIncomplete;

    records.push_back(std::move(rec));
    f_prev = records.back().f_identified;
  }
  return records;
}

}  // namespace sparsegain

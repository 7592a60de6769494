#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sparsegain/matrix.hpp"
#include "sparsegain/model.hpp"
#include "sparsegain/path.hpp"

namespace sparsegain {

/// Round-trippable decimal rendering (%.17g).
std::string format_double(double x);

/// Write-then-rename so readers never observe partial files.
void atomic_write(const std::filesystem::path& path, const std::string& content);

// Plant/matrix text format: blank lines and '#' comments are ignored; each
// stanza is `matrix NAME ROWS COLS` followed by ROWS whitespace-separated
// data lines. A plant file needs stanzas A, B1, B2, Q, R.

Plant read_plant_file(const std::filesystem::path& path);
void write_plant_file(const std::filesystem::path& path, const Plant& plant);

/// All stanzas of a matrix file, keyed by name.
std::map<std::string, Matrix> read_matrix_stanzas(const std::filesystem::path& path);
std::string render_matrix_stanza(const std::string& name, const Matrix& m);
void write_matrix_file(const std::filesystem::path& path, const std::string& name,
                       const Matrix& m);

/// Sparsity pattern as text: 'X' nonzero, '.' zero; block boundaries drawn
/// with '|' and '-' when a partition is given.
std::string render_pattern(const StructureMask& mask,
                           const std::optional<BlockPartition>& blocks = std::nullopt);

/// Trade-off table, one row per record. Ratios are taken against record 0
/// (the centralized base point).
std::string render_tradeoff_csv(const std::vector<GammaRecord>& records);

/// Line-delimited records mirroring GammaRecord, gains as nested row arrays.
std::string render_records_jsonl(const std::vector<GammaRecord>& records);

}  // namespace sparsegain

#include "sparsegain/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sparsegain/errors.hpp"

namespace sparsegain {

namespace {

using ordered_json = nlohmann::ordered_json;

struct Token {
  std::string text;
  int line;
  int column;
};

// Whitespace tokenizer that remembers 1-based line/column positions and
// drops '#' comments.
std::vector<Token> tokenize(std::istream& in) {
  std::vector<Token> tokens;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t i = 0;
    while (i < line.size()) {
      if (std::isspace(static_cast<unsigned char>(line[i]))) {
        ++i;
        continue;
      }
      if (line[i] == '#') break;
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      tokens.push_back({line.substr(i, j - i), lineno, static_cast<int>(i) + 1});
      i = j;
    }
  }
  return tokens;
}

int parse_count(const Token& tok, const char* what) {
  try {
    std::size_t used = 0;
    const int value = std::stoi(tok.text, &used);
    if (used != tok.text.size() || value < 0) throw std::invalid_argument("");
    return value;
  } catch (const std::exception&) {
    throw ParseError(std::string("expected a nonnegative integer for ") + what + ", got '" +
                         tok.text + "'",
                     tok.line, tok.column);
  }
}

double parse_number(const Token& tok) {
  try {
    std::size_t used = 0;
    const double value = std::stod(tok.text, &used);
    if (used != tok.text.size()) throw std::invalid_argument("");
    return value;
  } catch (const std::exception&) {
    throw ParseError("expected a number, got '" + tok.text + "'", tok.line, tok.column);
  }
}

std::map<std::string, Matrix> parse_stanzas(std::istream& in) {
  const std::vector<Token> tokens = tokenize(in);
  std::map<std::string, Matrix> stanzas;
  std::size_t pos = 0;
  while (pos < tokens.size()) {
    const Token& head = tokens[pos];
    if (head.text != "matrix")
      throw ParseError("expected keyword 'matrix', got '" + head.text + "'", head.line,
                       head.column);
    if (pos + 3 >= tokens.size())
      throw ParseError("truncated matrix header", head.line, head.column);
    const std::string name = tokens[pos + 1].text;
    const int rows = parse_count(tokens[pos + 2], "row count");
    const int cols = parse_count(tokens[pos + 3], "column count");
    pos += 4;
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) {
        if (pos >= tokens.size())
          throw ParseError("matrix '" + name + "' is missing entries", head.line, head.column);
        m(i, j) = parse_number(tokens[pos]);
        ++pos;
      }
    if (stanzas.count(name))
      throw ParseError("duplicate matrix '" + name + "'", head.line, head.column);
    stanzas.emplace(name, std::move(m));
  }
  return stanzas;
}

ordered_json matrix_to_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json mask_to_json(const StructureMask& mask) {
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < mask.mask.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 0; j < mask.mask.cols(); ++j)
      row.push_back(mask.mask(i, j) != 0.0 ? 1 : 0);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, path);
}

std::map<std::string, Matrix> read_matrix_stanzas(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return parse_stanzas(in);
}

Plant read_plant_file(const std::filesystem::path& path) {
  std::map<std::string, Matrix> stanzas = read_matrix_stanzas(path);
  auto take = [&](const char* name) -> Matrix {
    auto it = stanzas.find(name);
    if (it == stanzas.end())
      throw ParseError("plant file is missing matrix '" + std::string(name) + "'", 1, 1);
    return it->second;
  };
  Plant plant;
  plant.a = take("A");
  plant.b1 = take("B1");
  plant.b2 = take("B2");
  plant.q = take("Q");
  plant.r = take("R");
  return plant;
}

std::string render_matrix_stanza(const std::string& name, const Matrix& m) {
  std::string out = "matrix " + name + " " + std::to_string(m.rows()) + " " +
                    std::to_string(m.cols()) + "\n";
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out += ' ';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

void write_plant_file(const std::filesystem::path& path, const Plant& plant) {
  std::string out;
  out += render_matrix_stanza("A", plant.a);
  out += render_matrix_stanza("B1", plant.b1);
  out += render_matrix_stanza("B2", plant.b2);
  out += render_matrix_stanza("Q", plant.q);
  out += render_matrix_stanza("R", plant.r);
  atomic_write(path, out);
}

void write_matrix_file(const std::filesystem::path& path, const std::string& name,
                       const Matrix& m) {
  atomic_write(path, render_matrix_stanza(name, m));
}

std::string render_pattern(const StructureMask& mask,
                           const std::optional<BlockPartition>& blocks) {
  const Matrix& m = mask.mask;
  std::vector<bool> col_sep(m.cols(), false);
  std::vector<bool> row_sep(m.rows(), false);
  if (blocks) {
    blocks->validate(m.rows(), m.cols());
    int acc = 0;
    for (int b = 0; b + 1 < blocks->num_block_cols(); ++b) {
      acc += blocks->col_sizes[b];
      col_sep[acc - 1] = true;  // separator after this column
    }
    acc = 0;
    for (int b = 0; b + 1 < blocks->num_block_rows(); ++b) {
      acc += blocks->row_sizes[b];
      row_sep[acc - 1] = true;
    }
  }
  std::string out;
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      out += (m(i, j) != 0.0) ? 'X' : '.';
      if (col_sep[j] && j + 1 < m.cols()) out += '|';
    }
    out += '\n';
    if (row_sep[i] && i + 1 < m.rows()) {
      for (int j = 0; j < m.cols(); ++j) {
        out += '-';
        if (col_sep[j] && j + 1 < m.cols()) out += '+';
      }
      out += '\n';
    }
  }
  return out;
}

std::string render_tradeoff_csv(const std::vector<GammaRecord>& records) {
  std::string out = "gamma,nnz,nnz_ratio,nnz_blocks,J_identified,J_polished,dJ_percent,"
                    "admm_iters,status\n";
  if (records.empty()) return out;
  const double base_nnz = std::max(1, records.front().nnz);
  const double base_j = records.front().j_polished;
  for (const GammaRecord& rec : records) {
    out += format_double(rec.gamma);
    out += ',' + std::to_string(rec.nnz);
    out += ',' + format_double(rec.nnz / base_nnz);
    out += ',' + std::to_string(rec.nnz_blocks);
    out += ',' + format_double(rec.j_identified);
    out += ',' + format_double(rec.j_polished);
    out += ',' + format_double(100.0 * (rec.j_polished - base_j) / base_j);
    out += ',' + std::to_string(rec.admm_iters);
    out += ',' + to_string(rec.status);
    out += '\n';
  }
  return out;
}

std::string render_records_jsonl(const std::vector<GammaRecord>& records) {
  std::string out;
  const double base_nnz = records.empty() ? 1.0 : std::max(1, records.front().nnz);
  const double base_j = records.empty() ? 1.0 : records.front().j_polished;
  for (const GammaRecord& rec : records) {
    ordered_json j;
    j["gamma"] = rec.gamma;
    j["status"] = to_string(rec.status);
    j["admm_iters"] = rec.admm_iters;
    j["nnz"] = rec.nnz;
    j["nnz_blocks"] = rec.nnz_blocks;
    j["nnz_ratio"] = rec.nnz / base_nnz;
    j["j_identified"] = rec.j_identified;
    j["j_polished"] = rec.j_polished;
    j["dj_percent"] = 100.0 * (rec.j_polished - base_j) / base_j;
    ordered_json cert;
    cert["primal"] = rec.certificate.primal;
    cert["stationarity"] = rec.certificate.stationarity;
    if (std::isnan(rec.certificate.subdiff))
      cert["subdiff"] = nullptr;
    else
      cert["subdiff"] = rec.certificate.subdiff;
    j["certificate"] = std::move(cert);
    j["mask"] = mask_to_json(rec.mask);
    j["f_identified"] = matrix_to_json(rec.f_identified);
    j["f_polished"] = matrix_to_json(rec.f_polished);
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace sparsegain

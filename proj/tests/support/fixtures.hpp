#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "embeval/embedding_store.hpp"
#include "oracles.hpp"

namespace fixtures {

inline std::filesystem::path path(const std::string& rel) { return std::filesystem::path(EMBEVAL_FIXTURE_DIR) / rel; }

inline std::string read(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline embeval::EmbeddingModel to_embedding(const oracle::Model& m, const std::string& name) {
  return embeval::EmbeddingModel(name, m.dim, m.vocab, m.rows);
}

// Model from (token, components) rows.
inline embeval::EmbeddingModel planted(const std::string& name,
                                       const std::vector<std::pair<std::string, std::vector<float>>>& rows) {
  std::vector<std::string> vocab;
  std::vector<float> matrix;
  for (const auto& [t, v] : rows) {
    vocab.push_back(t);
    matrix.insert(matrix.end(), v.begin(), v.end());
  }
  return embeval::EmbeddingModel(name, rows.front().second.size(), vocab, matrix);
}

inline oracle::Model to_oracle(const embeval::EmbeddingModel& m) {
  return oracle::Model{m.vocab(), m.dim(), m.matrix()};
}

// Scratch directory under the build tree, emptied on construction.
inline std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("embeval_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace fixtures

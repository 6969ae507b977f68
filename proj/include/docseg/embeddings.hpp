// Pretrained word-embedding loader. Text format, one entry per line:
// word followed by d space-separated decimals; an optional first line
// "count dim" is accepted as a header. Truncation keeps vector prefixes.
#pragma once

#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "docseg/errors.hpp"
#include "docseg/matrix.hpp"

namespace docseg {

struct EmbeddingTable {
  std::unordered_map<std::string, Vector> vectors;
  std::size_t dim = 0;

  const Vector* find(const std::string& word) const {
    auto it = vectors.find(word);
    return it == vectors.end() ? nullptr : &it->second;
  }
};

namespace detail {

inline bool parse_all_as_size(const std::vector<std::string>& fields, std::vector<std::size_t>& out) {
  out.clear();
  for (const std::string& f : fields) {
    if (f.empty()) return false;
    char* end = nullptr;
    unsigned long long v = std::strtoull(f.c_str(), &end, 10);
    if (end == f.c_str() || *end != '\0') return false;
    out.push_back(static_cast<std::size_t>(v));
  }
  return true;
}

inline std::vector<std::string> split_spaces(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream ss(line);
  std::string f;
  while (ss >> f) fields.push_back(std::move(f));
  return fields;
}

}  // namespace detail

inline EmbeddingTable load_embeddings(std::istream& in, const std::string& source,
                                      std::optional<std::size_t> truncate_to = std::nullopt) {
  EmbeddingTable table;
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::size_t> declared_count;
  bool first_content_line = true;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields = detail::split_spaces(line);
    if (first_content_line && fields.size() == 2) {
      std::vector<std::size_t> header;
      if (detail::parse_all_as_size(fields, header)) {
        declared_count = header[0];
        first_content_line = false;
        continue;
      }
    }
    first_content_line = false;
    if (fields.size() < 2) {
      throw FormatError(source + " line " + std::to_string(line_no) +
                        ": expected a word and at least one component");
    }
    Vector vec;
    vec.reserve(fields.size() - 1);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      char* end = nullptr;
      double v = std::strtod(fields[i].c_str(), &end);
      if (end == fields[i].c_str() || *end != '\0') {
        throw FormatError(source + " line " + std::to_string(line_no) + ": bad component '" +
                          fields[i] + "'");
      }
      vec.push_back(v);
    }
    if (table.dim == 0 && table.vectors.empty()) {
      table.dim = vec.size();
    } else if (vec.size() != table.dim) {
      throw FormatError(source + " line " + std::to_string(line_no) + ": vector of dimension " +
                        std::to_string(vec.size()) + " in a table of dimension " +
                        std::to_string(table.dim));
    }
    table.vectors[fields[0]] = std::move(vec);
  }

  if (declared_count && *declared_count != table.vectors.size()) {
    throw FormatError(source + ": header declares " + std::to_string(*declared_count) +
                      " entries, file contains " + std::to_string(table.vectors.size()));
  }
  if (truncate_to) {
    if (*truncate_to == 0) throw ConfigError("load_embeddings: truncation dimension must be positive");
    if (*truncate_to > table.dim) {
      throw ConfigError("load_embeddings: cannot truncate dimension " + std::to_string(table.dim) +
                        " vectors to " + std::to_string(*truncate_to));
    }
    for (auto& [word, vec] : table.vectors) vec.resize(*truncate_to);
    table.dim = *truncate_to;
  }
  return table;
}

inline EmbeddingTable load_embeddings(const std::string& path,
                                      std::optional<std::size_t> truncate_to = std::nullopt) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open embedding file: " + path);
  return load_embeddings(in, path, truncate_to);
}

}  // namespace docseg

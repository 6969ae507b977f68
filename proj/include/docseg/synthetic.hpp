// Synthetic corpus generator for desk-scale verification. Documents are
// built from sentences of filler words, connectives and punctuation; gold
// B labels are then derived from a configurable set of boundary rules, so
// every corpus is labeled by a deterministic function of its word/POS
// sequence and the rules are learnable by construction.
#pragma once

#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "docseg/corpus.hpp"
#include "docseg/errors.hpp"
#include "docseg/random.hpp"

namespace docseg {

enum class BoundaryRule : unsigned char {
  AfterPunct,     // B on every token following a PUNCT-tagged token
  ConnectiveSet,  // B on every token drawn from the connective word set
  SentenceStart,  // B at sentence-start tokens
};

struct SyntheticSpec {
  std::size_t n_docs = 10;
  std::size_t len_min = 15;  // tokens per document (lower bound)
  std::size_t len_max = 30;
  std::vector<BoundaryRule> rules;
  std::size_t vocab_size = 50;  // number of distinct filler word types
  std::uint64_t seed = 1;

  std::vector<std::string> connectives = {"conj1", "conj2"};
  std::string filler_prefix = "w";
  std::string id_prefix = "synth";
  double connective_prob = 0.15;  // per mid-sentence slot
  double comma_prob = 0.05;       // mid-sentence PUNCT
  std::size_t sent_len_min = 5;
  std::size_t sent_len_max = 9;
};

namespace detail {

// Stable 64-bit FNV-1a; surface -> POS assignment must not depend on the
// standard library's std::hash.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline const char* filler_pos(const std::string& surface) {
  static const char* kPool[] = {"NOUN", "VERB", "ADJ", "ADV", "DET", "PRON"};
  return kPool[fnv1a(surface) % 6];
}

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace detail

inline BoundaryRule parse_rule(const std::string& name) {
  if (name == "punct") return BoundaryRule::AfterPunct;
  if (name == "connective") return BoundaryRule::ConnectiveSet;
  if (name == "sentence") return BoundaryRule::SentenceStart;
  throw ConfigError("unknown boundary rule '" + name + "' (expected punct, connective or sentence)");
}

// Key-value spec file: one `key = value` per line, # comments, lists
// comma-separated. Keys: n_docs, len_min, len_max, rules, vocab_size, seed,
// connectives, filler_prefix, id_prefix, connective_prob, comma_prob,
// sent_len_min, sent_len_max.
inline SyntheticSpec parse_synthetic_spec(std::istream& in, const std::string& source) {
  SyntheticSpec spec;
  spec.rules.clear();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + " line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string key = detail::trim(t.substr(0, eq));
    std::string value = detail::trim(t.substr(eq + 1));
    auto as_size = [&](const std::string& v) -> std::size_t {
      char* end = nullptr;
      unsigned long long n = std::strtoull(v.c_str(), &end, 10);
      if (end == v.c_str() || *end != '\0') {
        throw ConfigError(source + " line " + std::to_string(line_no) + ": bad integer '" + v + "'");
      }
      return static_cast<std::size_t>(n);
    };
    auto as_double = [&](const std::string& v) -> double {
      char* end = nullptr;
      double d = std::strtod(v.c_str(), &end);
      if (end == v.c_str() || *end != '\0') {
        throw ConfigError(source + " line " + std::to_string(line_no) + ": bad number '" + v + "'");
      }
      return d;
    };
    if (key == "n_docs") spec.n_docs = as_size(value);
    else if (key == "len_min") spec.len_min = as_size(value);
    else if (key == "len_max") spec.len_max = as_size(value);
    else if (key == "vocab_size") spec.vocab_size = as_size(value);
    else if (key == "seed") spec.seed = as_size(value);
    else if (key == "sent_len_min") spec.sent_len_min = as_size(value);
    else if (key == "sent_len_max") spec.sent_len_max = as_size(value);
    else if (key == "connective_prob") spec.connective_prob = as_double(value);
    else if (key == "comma_prob") spec.comma_prob = as_double(value);
    else if (key == "filler_prefix") spec.filler_prefix = value;
    else if (key == "id_prefix") spec.id_prefix = value;
    else if (key == "connectives") spec.connectives = detail::split_commas(value);
    else if (key == "rules") {
      for (const std::string& r : detail::split_commas(value)) spec.rules.push_back(parse_rule(r));
    } else {
      throw ConfigError(source + " line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  return spec;
}

inline SyntheticSpec parse_synthetic_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open synthetic spec file: " + path);
  return parse_synthetic_spec(in, path);
}

inline std::vector<Document> generate_synthetic(const SyntheticSpec& spec) {
  if (spec.rules.empty()) throw ConfigError("generate_synthetic: empty boundary rule set");
  if (spec.len_min == 0 || spec.len_max < spec.len_min) {
    throw ConfigError("generate_synthetic: bad document length range");
  }
  if (spec.sent_len_min == 0 || spec.sent_len_max < spec.sent_len_min) {
    throw ConfigError("generate_synthetic: bad sentence length range");
  }
  bool wants_connectives = false;
  for (BoundaryRule r : spec.rules) wants_connectives |= (r == BoundaryRule::ConnectiveSet);
  if (wants_connectives && spec.connectives.empty()) {
    throw ConfigError("generate_synthetic: connective rule requested with an empty connective set");
  }

  std::mt19937_64 rng = make_rng(spec.seed, 0xd0c5e6);
  std::uniform_int_distribution<std::size_t> doc_len(spec.len_min, spec.len_max);
  std::uniform_int_distribution<std::size_t> sent_len(spec.sent_len_min, spec.sent_len_max);
  std::uniform_int_distribution<std::size_t> filler_id(0, spec.vocab_size - 1);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  std::vector<Document> docs;
  docs.reserve(spec.n_docs);
  for (std::size_t di = 0; di < spec.n_docs; ++di) {
    Document doc;
    {
      std::ostringstream id;
      id << spec.id_prefix << "-";
      id.width(4);
      id.fill('0');
      id << di;
      doc.id = id.str();
    }
    const std::size_t target = doc_len(rng);
    while (doc.tokens.size() < target) {
      const std::size_t slots = sent_len(rng);
      for (std::size_t j = 0; j < slots; ++j) {
        Token tok;
        tok.sent_start = (j == 0);
        const bool last = (j + 1 == slots);
        if (last) {
          tok.surface = ".";
          tok.upos = "PUNCT";
        } else if (j > 0 && !spec.connectives.empty() && coin(rng) < spec.connective_prob) {
          std::uniform_int_distribution<std::size_t> pick(0, spec.connectives.size() - 1);
          tok.surface = spec.connectives[pick(rng)];
          tok.upos = detail::filler_pos(tok.surface);
        } else if (j > 0 && coin(rng) < spec.comma_prob) {
          tok.surface = ",";
          tok.upos = "PUNCT";
        } else {
          tok.surface = spec.filler_prefix + std::to_string(filler_id(rng));
          tok.upos = detail::filler_pos(tok.surface);
        }
        doc.tokens.push_back(std::move(tok));
      }
    }

    // Derive gold labels from the active rules.
    std::vector<Token>& toks = doc.tokens;
    for (Token& t : toks) t.gold_label = Label::I;
    for (BoundaryRule r : spec.rules) {
      switch (r) {
        case BoundaryRule::AfterPunct:
          for (std::size_t p = 1; p < toks.size(); ++p) {
            if (toks[p - 1].upos == "PUNCT") toks[p].gold_label = Label::B;
          }
          break;
        case BoundaryRule::ConnectiveSet:
          for (Token& t : toks) {
            for (const std::string& c : spec.connectives) {
              if (t.surface == c) {
                t.gold_label = Label::B;
                break;
              }
            }
          }
          break;
        case BoundaryRule::SentenceStart:
          for (Token& t : toks) {
            if (t.sent_start) t.gold_label = Label::B;
          }
          break;
      }
    }
    toks.front().gold_label = Label::B;  // EDUs cover the document
    docs.push_back(std::move(doc));
  }
  return docs;
}

}  // namespace docseg

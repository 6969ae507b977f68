// Boundary scoring: document-level F1 over B labels disregarding each
// document's first word, and the intra-sentential variant that ignores
// sentences containing a single EDU. Counts are micro-aggregated over
// documents.
#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "docseg/corpus.hpp"
#include "docseg/errors.hpp"

namespace docseg {

struct Metrics {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  double precision() const {
    return (tp + fp) == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  }
  double recall() const {
    return (tp + fn) == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  }
  double f1() const {
    const double p = precision();
    const double r = recall();
    return (p + r) == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
  }

  // `tp fp fn precision recall f1`, ratios to 4 decimals.
  std::string to_line() const {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%zu %zu %zu %.4f %.4f %.4f", tp, fp, fn, precision(),
                  recall(), f1());
    return buf;
  }

  // Key-value form of the same record.
  std::string to_report() const {
    char buf[192];
    std::snprintf(buf, sizeof(buf),
                  "tp %zu\nfp %zu\nfn %zu\nprecision %.4f\nrecall %.4f\nf1 %.4f\n", tp, fp, fn,
                  precision(), recall(), f1());
    return buf;
  }
};

// Label-sequence form used by the trainers; one inner vector per document.
inline Metrics boundary_f1(const std::vector<std::vector<Label>>& gold,
                           const std::vector<std::vector<Label>>& pred) {
  if (gold.size() != pred.size()) {
    throw DataError("boundary_f1: " + std::to_string(gold.size()) + " gold documents vs " +
                    std::to_string(pred.size()) + " predicted");
  }
  Metrics m;
  for (std::size_t d = 0; d < gold.size(); ++d) {
    if (gold[d].size() != pred[d].size()) {
      throw DataError("boundary_f1: document " + std::to_string(d) + " has " +
                      std::to_string(gold[d].size()) + " gold labels vs " +
                      std::to_string(pred[d].size()) + " predicted");
    }
    for (std::size_t p = 1; p < gold[d].size(); ++p) {
      const bool g = gold[d][p] == Label::B;
      const bool h = pred[d][p] == Label::B;
      if (g && h) ++m.tp;
      else if (h) ++m.fp;
      else if (g) ++m.fn;
    }
  }
  return m;
}

namespace detail {

inline void check_aligned(const std::vector<Document>& gold, const std::vector<Document>& pred) {
  if (gold.size() != pred.size()) {
    throw DataError("corpora differ in document count: " + std::to_string(gold.size()) + " vs " +
                    std::to_string(pred.size()));
  }
  for (std::size_t d = 0; d < gold.size(); ++d) {
    if (gold[d].id != pred[d].id) {
      throw DataError("document order mismatch at position " + std::to_string(d) + ": '" +
                      gold[d].id + "' vs '" + pred[d].id + "'");
    }
    if (gold[d].tokens.size() != pred[d].tokens.size()) {
      throw DataError("document '" + gold[d].id + "': " + std::to_string(gold[d].tokens.size()) +
                      " gold tokens vs " + std::to_string(pred[d].tokens.size()) + " predicted");
    }
  }
}

inline std::vector<Label> labels_of(const Document& doc) {
  std::vector<Label> out;
  out.reserve(doc.tokens.size());
  for (const Token& t : doc.tokens) {
    if (!t.gold_label) {
      throw DataError("document '" + doc.id + "' has unlabeled tokens");
    }
    out.push_back(*t.gold_label);
  }
  return out;
}

}  // namespace detail

inline Metrics boundary_f1(const std::vector<Document>& gold, const std::vector<Document>& pred) {
  detail::check_aligned(gold, pred);
  std::vector<std::vector<Label>> g, p;
  g.reserve(gold.size());
  p.reserve(pred.size());
  for (std::size_t d = 0; d < gold.size(); ++d) {
    g.push_back(detail::labels_of(gold[d]));
    p.push_back(detail::labels_of(pred[d]));
  }
  return boundary_f1(g, p);
}

// Intra-sentential scoring. Sentences are cut at the gold sentence marks;
// a sentence whose gold span holds no boundary beyond its initial token is
// a single EDU and is dropped; the rest are scored like documents, i.e.
// positions after the sentence-initial token.
inline Metrics intra_sentential_f1(const std::vector<Document>& gold,
                                   const std::vector<Document>& pred) {
  detail::check_aligned(gold, pred);
  Metrics m;
  for (std::size_t d = 0; d < gold.size(); ++d) {
    const Document& gd = gold[d];
    if (!gd.has_sentence_marks()) {
      throw ProtocolError("document '" + gd.id +
                          "' carries no sentence marks; intra-sentential scoring needs them");
    }
    const std::vector<Label> g = detail::labels_of(gd);
    const std::vector<Label> p = detail::labels_of(pred[d]);

    std::size_t start = 0;
    const std::size_t n = gd.tokens.size();
    while (start < n) {
      std::size_t end = start + 1;
      while (end < n && !gd.tokens[end].sent_start) ++end;
      bool any_internal_gold = false;
      for (std::size_t t = start + 1; t < end; ++t) any_internal_gold |= (g[t] == Label::B);
      if (any_internal_gold) {
        for (std::size_t t = start + 1; t < end; ++t) {
          const bool gb = g[t] == Label::B;
          const bool pb = p[t] == Label::B;
          if (gb && pb) ++m.tp;
          else if (pb) ++m.fp;
          else if (gb) ++m.fn;
        }
      }
      start = end;
    }
  }
  return m;
}

}  // namespace docseg

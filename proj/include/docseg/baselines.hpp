// Rule-based reference systems: boundaries at sentence starts (UDP-S) and
// boundaries after punctuation-tagged tokens (UDP-P). Both consume
// annotations produced upstream; neither splits or tags anything itself.
#pragma once

#include <vector>

#include "docseg/corpus.hpp"
#include "docseg/errors.hpp"

namespace docseg {

inline std::vector<Label> baseline_sentence(const Document& doc) {
  if (doc.tokens.empty()) throw DataError("baseline_sentence: document '" + doc.id + "' is empty");
  if (!doc.has_sentence_marks()) {
    throw ProtocolError("document '" + doc.id +
                        "' has no sentence marks; run a sentence splitter and set the S column "
                        "before using the sentence baseline");
  }
  std::vector<Label> labels;
  labels.reserve(doc.tokens.size());
  for (const Token& t : doc.tokens) {
    labels.push_back(t.sent_start ? Label::B : Label::I);
  }
  labels.front() = Label::B;
  return labels;
}

// B after each PUNCT token; a trailing PUNCT produces no boundary. Output
// depends only on the POS sequence.
inline std::vector<Label> baseline_punct(const Document& doc) {
  if (doc.tokens.empty()) throw DataError("baseline_punct: document '" + doc.id + "' is empty");
  std::vector<Label> labels(doc.tokens.size(), Label::I);
  labels[0] = Label::B;
  for (std::size_t p = 1; p < doc.tokens.size(); ++p) {
    if (doc.tokens[p - 1].upos == "PUNCT") labels[p] = Label::B;
  }
  return labels;
}

}  // namespace docseg

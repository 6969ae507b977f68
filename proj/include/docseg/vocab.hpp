// Vocabulary over words and POS tags in one shared index space, and the
// interleaved word/POS document encoding the model consumes. Word and POS
// entries live in separate namespaces: the tag NOUN never collides with
// the word "NOUN". Index 0 is the reserved UNK entry.
#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "docseg/corpus.hpp"
#include "docseg/errors.hpp"

namespace docseg {

class Vocab {
 public:
  static constexpr std::size_t kUnkIndex = 0;

  enum class EntryKind : unsigned char { Unk, Word, Pos };
  struct Entry {
    EntryKind kind;
    std::string text;
  };

  Vocab() { entries_.push_back({EntryKind::Unk, "<unk>"}); }

  std::size_t size() const { return entries_.size(); }

  std::size_t add_word(const std::string& surface) {
    auto it = words_.find(surface);
    if (it != words_.end()) return it->second;
    const std::size_t idx = entries_.size();
    entries_.push_back({EntryKind::Word, surface});
    words_.emplace(surface, idx);
    return idx;
  }

  std::size_t add_pos(const std::string& upos) {
    auto it = tags_.find(upos);
    if (it != tags_.end()) return it->second;
    const std::size_t idx = entries_.size();
    entries_.push_back({EntryKind::Pos, upos});
    tags_.emplace(upos, idx);
    return idx;
  }

  std::size_t word_id(const std::string& surface) const {
    auto it = words_.find(surface);
    return it == words_.end() ? kUnkIndex : it->second;
  }

  std::size_t pos_id(const std::string& upos) const {
    auto it = tags_.find(upos);
    return it == tags_.end() ? kUnkIndex : it->second;
  }

  bool has_word(const std::string& surface) const { return words_.count(surface) != 0; }
  bool has_pos(const std::string& upos) const { return tags_.count(upos) != 0; }

  // Entries in index order; entries()[0] is UNK.
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> words_;
  std::unordered_map<std::string, std::size_t> tags_;
};

// Index assignment follows first occurrence over (documents, tokens) order,
// so the same corpus always yields the same vocabulary.
inline Vocab build_vocab(const std::vector<Document>& docs) {
  if (docs.empty()) throw DataError("build_vocab: no documents");
  Vocab v;
  for (const Document& d : docs) {
    for (const Token& t : d.tokens) {
      v.add_word(t.surface);
      v.add_pos(t.upos);
    }
  }
  return v;
}

// The model's input/output view of a document: ids alternate word index and
// POS index (length 2T); POS positions always carry label I and a false
// token mask.
struct EncodedSequence {
  std::vector<std::size_t> ids;
  std::vector<Label> labels;
  std::vector<bool> token_mask;
  bool has_gold = false;

  std::size_t length() const { return ids.size(); }
  std::size_t token_count() const { return ids.size() / 2; }
};

struct EncodeStats {
  std::size_t unknown_words = 0;
  std::size_t unknown_pos_tags = 0;  // unexpected in-language tags map to UNK, counted
};

inline EncodedSequence encode_document(const Document& doc, const Vocab& vocab,
                                       EncodeStats* stats = nullptr) {
  if (doc.tokens.empty()) throw DataError("encode_document: document '" + doc.id + "' is empty");
  EncodedSequence seq;
  const std::size_t n = doc.tokens.size();
  seq.ids.reserve(2 * n);
  seq.labels.reserve(2 * n);
  seq.token_mask.reserve(2 * n);
  seq.has_gold = true;
  for (const Token& t : doc.tokens) {
    if (t.upos.empty()) throw DataError("encode_document: token '" + t.surface + "' has no POS tag");
    const std::size_t wid = vocab.word_id(t.surface);
    const std::size_t pid = vocab.pos_id(t.upos);
    if (stats) {
      if (wid == Vocab::kUnkIndex && !vocab.has_word(t.surface)) ++stats->unknown_words;
      if (pid == Vocab::kUnkIndex && !vocab.has_pos(t.upos)) ++stats->unknown_pos_tags;
    }
    seq.ids.push_back(wid);
    seq.labels.push_back(t.gold_label.value_or(Label::I));
    seq.token_mask.push_back(true);
    if (!t.gold_label.has_value()) seq.has_gold = false;
    seq.ids.push_back(pid);
    seq.labels.push_back(Label::I);
    seq.token_mask.push_back(false);
  }
  return seq;
}

}  // namespace docseg

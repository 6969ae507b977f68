// Corpus model and DOCSEG file I/O.
//
// DOCSEG is a plain-text, diffable token-per-line format:
//
//   # id = <document id>
//   surface<TAB>upos<TAB>label<TAB>sentflag
//   ...
//   <blank line between documents>
//
// label is B, I or _ (unlabeled); sentflag is S (sentence start) or -.
#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "docseg/errors.hpp"

namespace docseg {

enum class Label : unsigned char { B = 0, I = 1 };

inline char label_char(Label l) { return l == Label::B ? 'B' : 'I'; }

struct Token {
  std::string surface;
  std::string upos;
  std::optional<Label> gold_label;
  bool sent_start = false;
};

struct Document {
  std::string id;
  std::vector<Token> tokens;

  bool has_gold_labels() const {
    for (const Token& t : tokens) {
      if (!t.gold_label.has_value()) return false;
    }
    return !tokens.empty();
  }

  bool has_sentence_marks() const {
    for (const Token& t : tokens) {
      if (t.sent_start) return true;
    }
    return false;
  }
};

struct CorpusStats {
  std::size_t documents = 0;
  std::size_t edus = 0;       // count of gold B labels
  std::size_t sentences = 0;  // count of sentence-start marks
  std::size_t words = 0;      // token count
};

inline CorpusStats corpus_stats(const std::vector<Document>& docs) {
  CorpusStats s;
  s.documents = docs.size();
  for (const Document& d : docs) {
    s.words += d.tokens.size();
    for (const Token& t : d.tokens) {
      if (t.gold_label == Label::B) ++s.edus;
      if (t.sent_start) ++s.sentences;
    }
  }
  return s;
}

namespace detail {

inline std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find('\t', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

inline void validate_document(const Document& doc, std::size_t line_no) {
  if (doc.tokens.empty()) {
    throw ParseError("line " + std::to_string(line_no) + ": empty document '" + doc.id + "'");
  }
  bool any_label = false;
  for (const Token& t : doc.tokens) any_label |= t.gold_label.has_value();
  if (any_label && doc.tokens.front().gold_label != Label::B) {
    throw ParseError("line " + std::to_string(line_no) + ": document '" + doc.id +
                     "' carries labels but its first token is not B");
  }
  if (doc.has_sentence_marks() && !doc.tokens.front().sent_start) {
    throw ParseError("line " + std::to_string(line_no) + ": document '" + doc.id +
                     "' carries sentence marks but its first token is not marked S");
  }
}

}  // namespace detail

inline std::vector<Document> read_corpus(std::istream& in, const std::string& source = "<stream>") {
  std::vector<Document> docs;
  std::optional<Document> current;
  std::string line;
  std::size_t line_no = 0;

  auto flush = [&](std::size_t at_line) {
    if (current) {
      detail::validate_document(*current, at_line);
      docs.push_back(std::move(*current));
      current.reset();
    }
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush(line_no);
      continue;
    }
    if (line.rfind("# id =", 0) == 0) {
      flush(line_no);
      current = Document{};
      std::string id = line.substr(6);
      while (!id.empty() && id.front() == ' ') id.erase(id.begin());
      current->id = id;
      continue;
    }
    if (line.front() == '#') continue;  // other comment lines are ignored
    if (!current) {
      throw ParseError(source + " line " + std::to_string(line_no) +
                       ": token line before any '# id =' header");
    }
    std::vector<std::string> fields = detail::split_tabs(line);
    if (fields.size() != 4) {
      throw ParseError(source + " line " + std::to_string(line_no) + ": expected 4 tab-separated fields, found " +
                       std::to_string(fields.size()));
    }
    Token tok;
    tok.surface = fields[0];
    tok.upos = fields[1];
    if (tok.surface.empty() || tok.upos.empty()) {
      throw ParseError(source + " line " + std::to_string(line_no) + ": empty surface or POS field");
    }
    if (fields[2] == "B") {
      tok.gold_label = Label::B;
    } else if (fields[2] == "I") {
      tok.gold_label = Label::I;
    } else if (fields[2] == "_") {
      tok.gold_label.reset();
    } else {
      throw ParseError(source + " line " + std::to_string(line_no) + ": label must be B, I or _, found '" +
                       fields[2] + "'");
    }
    if (fields[3] == "S") {
      tok.sent_start = true;
    } else if (fields[3] == "-") {
      tok.sent_start = false;
    } else {
      throw ParseError(source + " line " + std::to_string(line_no) +
                       ": sentence flag must be S or -, found '" + fields[3] + "'");
    }
    current->tokens.push_back(std::move(tok));
  }
  flush(line_no + 1);
  return docs;
}

inline std::vector<Document> read_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file: " + path);
  return read_corpus(in, path);
}

inline void write_corpus(const std::vector<Document>& docs, std::ostream& out) {
  bool first = true;
  for (const Document& d : docs) {
    if (!first) out << '\n';
    first = false;
    out << "# id = " << d.id << '\n';
    for (const Token& t : d.tokens) {
      if (t.surface.find_first_of("\t\n") != std::string::npos ||
          t.upos.find_first_of("\t\n") != std::string::npos) {
        throw DataError("document '" + d.id + "': surface/POS fields may not contain tabs or newlines");
      }
      out << t.surface << '\t' << t.upos << '\t'
          << (t.gold_label ? std::string(1, label_char(*t.gold_label)) : "_") << '\t'
          << (t.sent_start ? 'S' : '-') << '\n';
    }
  }
}

inline void write_corpus(const std::vector<Document>& docs, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open output file: " + path);
  write_corpus(docs, out);
}

// Writes `docs` with the given predicted labels in place of the gold column.
// read_corpus(write_predictions(docs, labels)) reproduces tokens, POS and labels.
inline void write_predictions(const std::vector<Document>& docs,
                              const std::vector<std::vector<Label>>& labels,
                              const std::string& path) {
  if (docs.size() != labels.size()) {
    throw DataError("write_predictions: " + std::to_string(docs.size()) + " documents but " +
                    std::to_string(labels.size()) + " label sequences");
  }
  std::vector<Document> out = docs;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (labels[i].size() != out[i].tokens.size()) {
      throw DataError("write_predictions: document '" + out[i].id + "' has " +
                      std::to_string(out[i].tokens.size()) + " tokens but " +
                      std::to_string(labels[i].size()) + " labels");
    }
    if (labels[i].empty()) {
      throw DataError("write_predictions: empty label sequence for document '" + out[i].id + "'");
    }
    for (std::size_t t = 0; t < labels[i].size(); ++t) {
      out[i].tokens[t].gold_label = labels[i][t];
    }
  }
  write_corpus(out, path);
}

}  // namespace docseg

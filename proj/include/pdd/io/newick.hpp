#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "pdd/core/phylo_tree.hpp"

namespace pdd::io {

struct ParsedTree {
  PhyloTree tree;
  std::vector<std::string> taxon_names;  // indexed by taxon id
};

inline bool is_name_char(char c) {
  return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != ',' &&
         c != ':' && c != ';' && c != '#' && c != '[' && c != ']';
}

// Newick with integer branch lengths. Vertices are numbered in preorder and
// taxa in order of appearance. line_offset/col_offset locate the text within
// a larger document for diagnostics.
class NewickParser {
 public:
  NewickParser(std::string_view text, std::size_t line_offset = 1, std::size_t col_offset = 1)
      : text_(text), line_(line_offset), col_(col_offset) {}

  ParsedTree parse() {
    skip_ws();
    VertexId root = subtree(kNoVertex);
    skip_ws();
    if (peek() == ':') {
      get();
      length();
    }
    skip_ws();
    if (peek() != ';') fail("expected ';' at end of tree");
    get();
    skip_ws();
    if (pos_ < text_.size()) fail("unexpected text after ';'");
    (void)root;
    ParsedTree out;
    out.taxon_names = names_;
    try {
      out.tree = PhyloTree(parent_, weight_, taxon_, names_.size(), PhyloTree::Arity::strict, labels_);
    } catch (const PreconditionError& e) {
      throw ParseError(line_, col_, std::string("invalid tree: ") + e.what());
    }
    return out;
  }

 private:
  VertexId subtree(VertexId parent) {
    skip_ws();
    VertexId v = static_cast<VertexId>(parent_.size());
    parent_.push_back(parent);
    weight_.push_back(0);
    taxon_.push_back(kNoTaxon);
    labels_.emplace_back();
    if (peek() == '(') {
      get();
      for (;;) {
        VertexId c = subtree(v);
        skip_ws();
        if (peek() != ':') fail("missing branch length");
        get();
        weight_[c] = length();
        skip_ws();
        if (peek() == ',') {
          get();
          continue;
        }
        if (peek() == ')') {
          get();
          break;
        }
        fail("expected ',' or ')'");
      }
      skip_ws();
      labels_[v] = name();
    } else {
      std::size_t l = line_, c = col_;
      std::string nm = name();
      if (nm.empty()) fail("expected a taxon name");
      if (!seen_.insert(nm).second) throw ParseError(l, c, "duplicate taxon name '" + nm + "'");
      taxon_[v] = static_cast<TaxonId>(names_.size());
      names_.push_back(nm);
      labels_[v] = nm;
    }
    return v;
  }

  std::string name() {
    std::string s;
    while (pos_ < text_.size() && is_name_char(text_[pos_])) s.push_back(get());
    return s;
  }

  Weight length() {
    skip_ws();
    std::size_t l = line_, c = col_;
    bool neg = false;
    if (peek() == '-' || peek() == '+') neg = get() == '-';
    std::string digits;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) digits.push_back(get());
    if (peek() == '.' || peek() == 'e' || peek() == 'E')
      throw ParseError(l, c, "branch length must be an integer");
    if (digits.empty()) throw ParseError(l, c, "expected a branch length");
    Weight w = 0;
    for (char d : digits) w = checked_add(checked_mul(w, 10), static_cast<Weight>(d - '0'));
    if (neg || w == 0) throw ParseError(l, c, "non-positive branch length");
    return w;
  }

  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        get();
      } else if (c == '[') {
        while (pos_ < text_.size() && text_[pos_] != ']') get();
        if (pos_ == text_.size()) fail("unterminated comment");
        get();
      } else {
        break;
      }
    }
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  char get() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }
  [[noreturn]] void fail(const std::string& msg) { throw ParseError(line_, col_, msg); }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_, col_;
  std::vector<VertexId> parent_;
  std::vector<Weight> weight_;
  std::vector<TaxonId> taxon_;
  std::vector<std::string> labels_;
  std::vector<std::string> names_;
  std::unordered_set<std::string> seen_;
};

inline ParsedTree parse_newick(std::string_view text) { return NewickParser(text).parse(); }

inline std::string to_newick(const PhyloTree& tree, const std::vector<std::string>& names) {
  std::string out;
  // iterative to survive deep caterpillars
  struct Frame {
    VertexId v;
    std::size_t next;
  };
  std::vector<Frame> stack{{tree.root(), 0}};
  while (!stack.empty()) {
    Frame& f = stack.back();
    const auto& ch = tree.children(f.v);
    if (ch.empty()) {
      out += tree.taxon(f.v) == kNoTaxon ? tree.label(f.v) : names[tree.taxon(f.v)];
    } else if (f.next < ch.size()) {
      out += f.next == 0 ? "(" : ",";
      VertexId c = ch[f.next++];
      stack.push_back({c, 0});
      continue;
    } else {
      out += ")";
      out += tree.label(f.v);
    }
    VertexId v = f.v;
    stack.pop_back();
    if (v != tree.root()) out += ":" + std::to_string(tree.weight(v));
  }
  out += ";";
  return out;
}

}  // namespace pdd::io

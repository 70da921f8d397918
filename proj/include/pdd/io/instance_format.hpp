#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pdd/core.hpp"
#include "pdd/io/newick.hpp"

namespace pdd::io {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  lines.push_back(cur);
  return lines;
}

inline std::uint64_t parse_uint(std::string_view s, std::size_t line, std::size_t col, const char* what) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ParseError(line, col, std::string("invalid value for ") + what + ": '" + std::string(s) + "'");
  return v;
}

// Reports one directed cycle by name.
inline std::string describe_cycle(std::size_t n, const std::vector<Arc>& arcs,
                                  const std::vector<std::string>& names) {
  std::vector<std::vector<TaxonId>> out(n);
  for (const Arc& a : arcs) out[a.prey].push_back(a.predator);
  std::vector<int> state(n, 0), parent(n, -1);
  for (std::size_t s = 0; s < n; ++s) {
    if (state[s]) continue;
    std::vector<std::pair<TaxonId, std::size_t>> stack{{static_cast<TaxonId>(s), 0}};
    state[s] = 1;
    while (!stack.empty()) {
      auto& [u, i] = stack.back();
      if (i < out[u].size()) {
        TaxonId v = out[u][i++];
        if (state[v] == 1) {
          std::vector<std::string> cyc{names[v]};
          for (TaxonId w = u; w != v; w = parent[w]) cyc.push_back(names[w]);
          std::string msg;
          for (auto it = cyc.rbegin(); it != cyc.rend(); ++it) msg += *it + " -> ";
          return msg + names[v];
        }
        if (state[v] == 0) {
          state[v] = 1;
          parent[v] = u;
          stack.push_back({v, 0});
        }
      } else {
        state[u] = 2;
        stack.pop_back();
      }
    }
  }
  return "";
}

struct WebLine {
  std::string prey, predator;
  std::size_t line, col;
};

inline FoodWeb build_web(const std::vector<std::string>& names, const std::vector<WebLine>& lines) {
  std::unordered_map<std::string, TaxonId> ids;
  for (std::size_t i = 0; i < names.size(); ++i) ids[names[i]] = static_cast<TaxonId>(i);
  std::vector<Arc> arcs;
  for (const auto& l : lines) {
    auto a = ids.find(l.prey);
    if (a == ids.end()) throw ParseError(l.line, l.col, "food web names unknown taxon '" + l.prey + "'");
    auto b = ids.find(l.predator);
    if (b == ids.end())
      throw ParseError(l.line, l.col, "food web names unknown taxon '" + l.predator + "'");
    if (a->second == b->second)
      throw ParseError(l.line, l.col, "self-loop on taxon '" + l.prey + "'");
    arcs.push_back({a->second, b->second});
  }
  std::string cyc = describe_cycle(names.size(), arcs, names);
  if (!cyc.empty()) {
    std::size_t line = lines.empty() ? 1 : lines.front().line;
    throw ParseError(line, 1, "food web has a cycle: " + cyc);
  }
  return FoodWeb(names.size(), std::move(arcs));
}

inline std::vector<WebLine> parse_web_lines(const std::vector<std::string>& lines, std::size_t first_line) {
  std::vector<WebLine> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view s = lines[i];
    if (auto h = s.find('#'); h != std::string_view::npos) s = s.substr(0, h);
    std::istringstream in{std::string(s)};
    std::string a, b, extra;
    if (!(in >> a)) continue;
    std::size_t col = lines[i].find(a) + 1;
    if (!(in >> b)) throw ParseError(first_line + i, col, "arc line needs 'prey predator'");
    if (in >> extra) throw ParseError(first_line + i, col, "arc line has more than two names");
    out.push_back({a, b, first_line + i, col});
  }
  return out;
}

}  // namespace detail

// Tree in Newick, web as "prey predator" lines.
inline Instance parse_instance(std::string_view tree_text, std::string_view web_text, std::uint64_t k,
                               Weight D) {
  ParsedTree pt = parse_newick(tree_text);
  Instance inst;
  inst.names = std::move(pt.taxon_names);
  inst.web = detail::build_web(inst.names, detail::parse_web_lines(detail::split_lines(web_text), 1));
  inst.tree = std::move(pt.tree);
  inst.k = k;
  inst.D = D;
  inst.validate();
  return inst;
}

// Section-tagged document: "#tree" (Newick, may span lines), "#web" (arc
// lines), "#params k=.. D=..". Other lines starting with '#' are comments.
inline Instance parse_instance(std::string_view document) {
  auto lines = detail::split_lines(document);
  enum class Sec { none, tree, web } sec = Sec::none;
  std::string tree_text;
  std::size_t tree_line = 0, tree_col = 1, web_line = 0;
  std::vector<std::string> web_lines;
  bool have_k = false, have_D = false, tree_done = false;
  std::uint64_t k = 0;
  Weight D = 0;

  auto tag = [](std::string_view s, std::string_view name) {
    if (s.substr(0, name.size()) != name) return false;
    return s.size() == name.size() || std::isspace(static_cast<unsigned char>(s[name.size()]));
  };

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    std::string_view raw = lines[i];
    std::string_view s = detail::trim(raw);
    if (tag(s, "#tree")) {
      if (tree_line) throw ParseError(lineno, 1, "duplicate #tree section");
      sec = Sec::tree;
      tree_line = lineno;
      std::string_view rest = s.substr(5);
      tree_col = raw.find("#tree") + 6;
      tree_text = std::string(rest);
      tree_done = tree_text.find(';') != std::string::npos;
      continue;
    }
    if (tag(s, "#web")) {
      if (web_line) throw ParseError(lineno, 1, "duplicate #web section");
      sec = Sec::web;
      web_line = lineno;
      continue;
    }
    if (tag(s, "#params")) {
      sec = Sec::none;
      std::istringstream in{std::string(s.substr(7))};
      std::string kv;
      while (in >> kv) {
        if (kv[0] == '#') break;
        auto eq = kv.find('=');
        std::size_t col = raw.find(kv) + 1;
        if (eq == std::string::npos) throw ParseError(lineno, col, "expected key=value in #params");
        std::string key = kv.substr(0, eq);
        std::string_view val = std::string_view(kv).substr(eq + 1);
        if (key == "k") {
          k = detail::parse_uint(val, lineno, col, "k");
          have_k = true;
        } else if (key == "D") {
          D = detail::parse_uint(val, lineno, col, "D");
          have_D = true;
        } else {
          throw ParseError(lineno, col, "unknown parameter '" + key + "'");
        }
      }
      continue;
    }
    if (!s.empty() && s.front() == '#') continue;
    if (sec == Sec::tree && !tree_done) {
      tree_text += "\n" + std::string(raw);
      tree_done = tree_text.find(';') != std::string::npos;
    } else if (sec == Sec::web) {
      web_lines.resize(lineno - web_line - 1);
      web_lines.push_back(std::string(raw));
    } else if (!s.empty()) {
      throw ParseError(lineno, 1, "text outside any section");
    }
  }
  if (!tree_line) throw ParseError(1, 1, "missing #tree section");
  if (!tree_done) throw ParseError(tree_line, 1, "tree is not terminated by ';'");
  if (!have_k || !have_D) throw ParseError(lines.size(), 1, "missing #params k=.. D=..");

  ParsedTree pt = NewickParser(tree_text, tree_line, tree_col).parse();
  Instance inst;
  inst.names = std::move(pt.taxon_names);
  inst.web = detail::build_web(inst.names, detail::parse_web_lines(web_lines, web_line + 1));
  inst.tree = std::move(pt.tree);
  inst.k = k;
  inst.D = D;
  inst.validate();
  return inst;
}

inline std::string serialize(const Instance& inst) {
  std::string out = "#tree " + to_newick(inst.tree, inst.names) + "\n#web\n";
  for (const Arc& a : inst.web.arcs()) out += inst.names[a.prey] + " " + inst.names[a.predator] + "\n";
  out += "#params k=" + std::to_string(inst.k) + " D=" + std::to_string(inst.D) + "\n";
  return out;
}

inline Instance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

// Renumbers vertices in preorder and taxa in leaf order, which is the
// numbering parse_instance produces.
inline Instance canonicalize(const Instance& inst) {
  return parse_instance(serialize(inst));
}

// FNV-1a over the serialized form.
inline std::string digest(const Instance& inst) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : serialize(inst)) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  static const char* hex = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) s[i] = hex[h & 15];
  return s;
}

}  // namespace pdd::io

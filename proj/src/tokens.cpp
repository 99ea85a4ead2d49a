#include "tokens.hpp"

#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace cise {

bool TokenSystem::tokens_conflict(const std::string& t1, const std::string& t2) const {
  std::pair<std::string, std::string> key =
      t1 <= t2 ? std::make_pair(t1, t2) : std::make_pair(t2, t1);
  for (const auto& c : conflicts)
    if (c == key) return true;
  return false;
}

std::vector<std::string> TokenSystem::tokens_of(const std::string& op,
                                                bool op_level) const {
  std::vector<std::string> out;
  if (op_level) {
    for (const auto& t : op_tokens)
      if (t.op == op) out.push_back(t.token);
  } else {
    for (const auto& t : arg_tokens)
      if (t.op == op) out.push_back(t.token);
  }
  return out;
}

bool TokenSystem::ops_conflict(const std::string& f, const std::string& g) const {
  auto f_op = tokens_of(f, true);
  auto g_op = tokens_of(g, true);
  auto f_arg = tokens_of(f, false);
  auto g_arg = tokens_of(g, false);

  for (const auto& a : f_op)
    for (const auto& b : g_op)
      if (tokens_conflict(a, b)) return true;
  // Mixed op-level/argument conflicts synchronize the whole operations.
  for (const auto& a : f_op)
    for (const auto& b : g_arg)
      if (tokens_conflict(a, b)) return true;
  for (const auto& a : f_arg)
    for (const auto& b : g_op)
      if (tokens_conflict(a, b)) return true;
  return false;
}

std::vector<std::pair<std::string, std::string>> TokenSystem::arg_conflicts(
    const std::string& f, const std::string& g) const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& a : arg_tokens) {
    if (a.op != f) continue;
    for (const auto& b : arg_tokens) {
      if (b.op != g) continue;
      if (tokens_conflict(a.token, b.token)) out.emplace_back(a.arg, b.arg);
    }
  }
  return out;
}

namespace {

// Strips (* ... *) comments; newlines inside comments are preserved so line
// numbers stay accurate.
std::string strip_comments(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  int depth = 0;
  for (size_t i = 0; i < text.size(); ++i) {
    if (i + 1 < text.size() && text[i] == '(' && text[i + 1] == '*') {
      ++depth;
      ++i;
      continue;
    }
    if (depth > 0 && i + 1 < text.size() && text[i] == '*' && text[i + 1] == ')') {
      --depth;
      ++i;
      continue;
    }
    if (depth == 0)
      out += text[i];
    else if (text[i] == '\n')
      out += '\n';
  }
  return out;
}

bool valid_ident(const std::string& s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

struct Line {
  int number;
  std::vector<std::string> words;
};

}  // namespace

TokenParseResult parse_tokens(const std::string& text, const Spec& spec,
                              const std::string& filename) {
  TokenParseResult result;
  auto& diags = result.diagnostics;
  auto err = [&](int line, const std::string& msg) {
    diags.push_back({{filename, line, 1, 0}, msg});
  };

  std::vector<Line> lines;
  {
    std::istringstream in(strip_comments(text));
    std::string raw;
    int n = 0;
    while (std::getline(in, raw)) {
      ++n;
      std::istringstream ws(raw);
      Line line{n, {}};
      std::string w;
      while (ws >> w) line.words.push_back(w);
      if (!line.words.empty()) lines.push_back(std::move(line));
    }
  }

  TokenSystem ts;
  std::map<std::string, int> declared;       // token -> declaring line
  std::set<std::string> declared_anywhere;   // for better conflict errors
  for (const Line& line : lines) {
    const auto& w = line.words;
    if (w[0] == "token" || w[0] == "argtoken") {
      size_t id_start = w[0] == "token" ? 2 : 3;
      for (size_t i = id_start; i < w.size(); ++i)
        if (valid_ident(w[i])) declared_anywhere.insert(w[i]);
    }
  }

  bool seen_conflict = false;
  for (const Line& line : lines) {
    const auto& w = line.words;

    if (w[0] == "token") {
      if (seen_conflict)
        err(line.number, "token declarations must precede conflict declarations");
      if (w.size() < 3) {
        err(line.number, "expected: token <operation> <tokenId>+");
        continue;
      }
      const std::string& op = w[1];
      if (!spec.find_op(op)) {
        err(line.number, "unknown operation: " + op);
        continue;
      }
      for (size_t i = 2; i < w.size(); ++i) {
        if (!valid_ident(w[i])) {
          err(line.number, "invalid token identifier: " + w[i]);
          continue;
        }
        if (declared.count(w[i])) {
          err(line.number, "token declared more than once: " + w[i]);
          continue;
        }
        declared[w[i]] = line.number;
        ts.op_tokens.push_back({op, w[i], {filename, line.number, 1, 0}});
      }
      continue;
    }

    if (w[0] == "argtoken") {
      if (seen_conflict)
        err(line.number, "token declarations must precede conflict declarations");
      if (w.size() != 4) {
        err(line.number, "expected: argtoken <operation> <argument> <tokenId>");
        continue;
      }
      const std::string& op_name = w[1];
      const std::string& arg = w[2];
      const std::string& tok = w[3];
      const OpDecl* op = spec.find_op(op_name);
      if (!op) {
        err(line.number, "unknown operation: " + op_name);
        continue;
      }
      bool arg_found = false;
      for (const auto& p : op->params) arg_found |= p.name == arg;
      if (!arg_found) {
        err(line.number,
            "operation " + op_name + " has no argument named '" + arg + "'");
        continue;
      }
      if (!valid_ident(tok)) {
        err(line.number, "invalid token identifier: " + tok);
        continue;
      }
      if (declared.count(tok)) {
        err(line.number, "token declared more than once: " + tok);
        continue;
      }
      declared[tok] = line.number;
      ts.arg_tokens.push_back({op_name, arg, tok, {filename, line.number, 1, 0}});
      continue;
    }

    if (w.size() == 3 && w[1] == "conflicts") {
      seen_conflict = true;
      bool ok = true;
      for (const std::string& t : {w[0], w[2]}) {
        if (declared.count(t)) continue;
        ok = false;
        if (declared_anywhere.count(t))
          err(line.number, "token used in a conflict before its declaration: " + t);
        else
          err(line.number, "conflict over undeclared token: " + t);
      }
      if (!ok) continue;
      auto key = w[0] <= w[2] ? std::make_pair(w[0], w[2]) : std::make_pair(w[2], w[0]);
      bool dup = false;
      for (const auto& c : ts.conflicts) dup |= c == key;
      if (!dup) ts.conflicts.push_back(std::move(key));
      continue;
    }

    err(line.number, "expected a token, argtoken, or conflicts declaration");
  }

  int last_line = lines.empty() ? 1 : lines.back().number;
  if (ts.op_tokens.empty() && ts.arg_tokens.empty())
    err(last_line, "a token system needs at least one token declaration");
  if (ts.conflicts.empty())
    err(last_line, "a token system needs at least one conflicts declaration");

  if (diags.empty()) result.tokens = std::move(ts);
  return result;
}

}  // namespace cise

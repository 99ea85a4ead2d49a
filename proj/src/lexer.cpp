#include "lexer.hpp"

#include <cctype>

namespace cise {

namespace {

struct Cursor {
  const std::string& text;
  std::string file;
  size_t pos = 0;
  int line = 1;
  int col = 1;

  bool eof() const { return pos >= text.size(); }
  char peek(size_t ahead = 0) const {
    return pos + ahead < text.size() ? text[pos + ahead] : '\0';
  }
  char take() {
    char c = text[pos++];
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return c;
  }
  SourceSpan span(int len = 1) const { return {file, line, col, len}; }
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

void skip_ws_and_comments(Cursor& cur) {
  for (;;) {
    while (!cur.eof() && std::isspace(static_cast<unsigned char>(cur.peek())))
      cur.take();
    if (cur.peek() == '(' && cur.peek(1) == '*') {
      SourceSpan open = cur.span(2);
      cur.take();
      cur.take();
      int depth = 1;
      while (depth > 0) {
        if (cur.eof()) throw LexError(open, "unterminated comment");
        if (cur.peek() == '(' && cur.peek(1) == '*') {
          cur.take();
          cur.take();
          ++depth;
        } else if (cur.peek() == '*' && cur.peek(1) == ')') {
          cur.take();
          cur.take();
          --depth;
        } else {
          cur.take();
        }
      }
      continue;
    }
    return;
  }
}

}  // namespace

std::vector<Token> lex(const std::string& text, const std::string& filename) {
  Cursor cur{text, filename};
  std::vector<Token> out;

  auto push = [&](Tok k, const std::string& s, SourceSpan sp) {
    out.push_back({k, s, 0, std::move(sp)});
  };

  for (;;) {
    skip_ws_and_comments(cur);
    if (cur.eof()) break;

    SourceSpan sp = cur.span();
    char c = cur.peek();

    if (ident_start(c)) {
      std::string id;
      while (!cur.eof() && ident_char(cur.peek())) id += cur.take();
      sp.length = static_cast<int>(id.size());
      push(Tok::Ident, id, sp);
      continue;
    }

    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num;
      while (!cur.eof() && std::isdigit(static_cast<unsigned char>(cur.peek())))
        num += cur.take();
      sp.length = static_cast<int>(num.size());
      Token t{Tok::Int, num, std::stoll(num), sp};
      out.push_back(std::move(t));
      continue;
    }

    auto two = [&](char a, char b) { return cur.peek() == a && cur.peek(1) == b; };
    auto three = [&](char a, char b, char d) {
      return cur.peek() == a && cur.peek(1) == b && cur.peek(2) == d;
    };

    if (three('<', '-', '>')) {
      cur.take(); cur.take(); cur.take();
      sp.length = 3;
      push(Tok::Iff, "<->", sp);
      continue;
    }
    if (two('<', '-')) {
      cur.take(); cur.take();
      sp.length = 2;
      push(Tok::Assign, "<-", sp);
      continue;
    }
    if (two('<', '>')) {
      cur.take(); cur.take();
      sp.length = 2;
      push(Tok::Ne, "<>", sp);
      continue;
    }
    if (two('<', '=')) {
      cur.take(); cur.take();
      sp.length = 2;
      push(Tok::Le, "<=", sp);
      continue;
    }
    if (two('>', '=')) {
      cur.take(); cur.take();
      sp.length = 2;
      push(Tok::Ge, ">=", sp);
      continue;
    }
    if (two('=', '=')) {
      cur.take(); cur.take();
      sp.length = 2;
      push(Tok::EqEq, "==", sp);
      continue;
    }
    if (two('&', '&') || two('/', '\\')) {
      cur.take(); cur.take();
      sp.length = 2;
      push(Tok::AmpAmp, "&&", sp);
      continue;
    }
    if (two('|', '|') || two('\\', '/')) {
      cur.take(); cur.take();
      sp.length = 2;
      push(Tok::PipePipe, "||", sp);
      continue;
    }
    if (two('-', '>')) {
      cur.take(); cur.take();
      sp.length = 2;
      push(Tok::Arrow, "->", sp);
      continue;
    }

    cur.take();
    switch (c) {
      case '{': push(Tok::LBrace, "{", sp); break;
      case '}': push(Tok::RBrace, "}", sp); break;
      case '(': push(Tok::LParen, "(", sp); break;
      case ')': push(Tok::RParen, ")", sp); break;
      case '[': push(Tok::LBracket, "[", sp); break;
      case ']': push(Tok::RBracket, "]", sp); break;
      case '.': push(Tok::Dot, ".", sp); break;
      case ',': push(Tok::Comma, ",", sp); break;
      case ';': push(Tok::Semi, ";", sp); break;
      case ':': push(Tok::Colon, ":", sp); break;
      case '@': push(Tok::At, "@", sp); break;
      case '=': push(Tok::Eq, "=", sp); break;
      case '<': push(Tok::Lt, "<", sp); break;
      case '>': push(Tok::Gt, ">", sp); break;
      case '+': push(Tok::Plus, "+", sp); break;
      case '-': push(Tok::Minus, "-", sp); break;
      default:
        throw LexError(sp, std::string("unexpected character '") + c + "'");
    }
  }

  SourceSpan end{filename, cur.line, cur.col, 0};
  out.push_back({Tok::End, "", 0, end});
  return out;
}

}  // namespace cise

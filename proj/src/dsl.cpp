// Parser for the presentation DSL:
//   p=3; gens x,y,z; x^3=1; y^3=1; z^3=1; [y,x]=z
// Relations are ';'-separated.  A power relation g^k=w fixes the relative
// order k of g (a p-power); omitting it means g^p=1.  Words are products of
// generator powers separated by '*', U+00B7 or juxtaposition; "1" is the
// empty word.  [a,b]=w with a of lower index than b is rewritten to
// [b,a]=w^-1, which is only defined here when w is a single generator power
// whose generator has the trivial power relation.
#include "twistclass/pcgroup.hpp"

#include <cctype>
#include <map>
#include <sstream>

namespace twistclass {

namespace {

struct Token {
  enum Kind { Ident, Number, Sym, End } kind;
  std::string text;
  u32 value = 0;
  size_t line, col;
};

struct Lexer {
  const std::string& s;
  size_t pos = 0, line = 1, col = 1;
  explicit Lexer(const std::string& str) : s(str) {}

  void bump(size_t k = 1) {
    for (size_t t = 0; t < k; t++) {
      if (pos < s.size() && s[pos] == '\n') {
        line++;
        col = 1;
      } else {
        col++;
      }
      pos++;
    }
  }

  Token next() {
    while (pos < s.size() && (std::isspace((unsigned char)s[pos]))) bump();
    Token tok;
    tok.line = line;
    tok.col = col;
    if (pos >= s.size()) {
      tok.kind = Token::End;
      return tok;
    }
    char c = s[pos];
    if (std::isalpha((unsigned char)c) || c == '_') {
      size_t start = pos;
      while (pos < s.size() &&
             (std::isalnum((unsigned char)s[pos]) || s[pos] == '_'))
        bump();
      tok.kind = Token::Ident;
      tok.text = s.substr(start, pos - start);
      return tok;
    }
    if (std::isdigit((unsigned char)c)) {
      u64 v = 0;
      size_t start = pos;
      while (pos < s.size() && std::isdigit((unsigned char)s[pos])) {
        v = v * 10 + (u64)(s[pos] - '0');
        if (v > 0xffffffffULL) break;
        bump();
      }
      tok.kind = Token::Number;
      tok.value = (u32)v;
      tok.text = s.substr(start, pos - start);
      return tok;
    }
    // middle dot U+00B7 as a word separator
    if ((unsigned char)c == 0xC2 && pos + 1 < s.size() &&
        (unsigned char)s[pos + 1] == 0xB7) {
      bump(2);
      tok.kind = Token::Sym;
      tok.text = "*";
      return tok;
    }
    if (std::string("=;^,[]*").find(c) != std::string::npos) {
      bump();
      tok.kind = Token::Sym;
      tok.text = std::string(1, c);
      return tok;
    }
    std::ostringstream os;
    os << "syntax error at line " << line << ", column " << col
       << ": unexpected character '" << c << "'";
    fail(os.str());
  }
};

[[noreturn]] void err_at(const Token& t, const std::string& msg) {
  std::ostringstream os;
  os << "syntax error at line " << t.line << ", column " << t.col << ": " << msg;
  fail(os.str());
}

struct RawLetter {
  std::string name;
  u32 exp;
  Token tok;
};
using RawWord = std::vector<RawLetter>;

struct RawPower {
  std::string gen;
  u32 k;
  RawWord rhs;
  Token tok;
};
struct RawComm {
  std::string a, b;
  RawWord rhs;
  Token tok;
};

}  // namespace

PcPresentation parse_presentation(const std::string& text) {
  Lexer lx(text);
  Token t = lx.next();
  auto expect_sym = [&](const char* s) {
    if (t.kind != Token::Sym || t.text != s)
      err_at(t, std::string("expected '") + s + "'");
    t = lx.next();
  };
  auto expect_ident = [&](const char* what) {
    if (t.kind != Token::Ident) err_at(t, std::string("expected ") + what);
    std::string s = t.text;
    t = lx.next();
    return s;
  };

  // p=<prime>
  if (t.kind != Token::Ident || t.text != "p") err_at(t, "expected 'p='");
  t = lx.next();
  expect_sym("=");
  if (t.kind != Token::Number) err_at(t, "expected prime after 'p='");
  u32 p = t.value;
  t = lx.next();
  expect_sym(";");

  // gens a,b,c
  if (t.kind != Token::Ident || t.text != "gens") err_at(t, "expected 'gens'");
  t = lx.next();
  std::vector<std::string> names;
  std::map<std::string, u32> index;
  for (;;) {
    Token here = t;
    std::string nm = expect_ident("generator name");
    if (index.count(nm)) err_at(here, "duplicate generator '" + nm + "'");
    index[nm] = (u32)names.size();
    names.push_back(nm);
    if (t.kind == Token::Sym && t.text == ",") {
      t = lx.next();
      continue;
    }
    break;
  }

  auto parse_word = [&]() {
    RawWord w;
    if (t.kind == Token::Number && t.value == 1) {
      t = lx.next();
      return w;
    }
    for (;;) {
      if (t.kind != Token::Ident)
        err_at(t, "expected generator or '1' in word");
      RawLetter l;
      l.tok = t;
      l.name = t.text;
      l.exp = 1;
      t = lx.next();
      if (t.kind == Token::Sym && t.text == "^") {
        t = lx.next();
        if (t.kind != Token::Number) err_at(t, "expected exponent");
        l.exp = t.value;
        t = lx.next();
      }
      w.push_back(l);
      if (t.kind == Token::Sym && t.text == "*") {
        t = lx.next();
        continue;
      }
      if (t.kind == Token::Ident) continue;  // juxtaposition
      break;
    }
    return w;
  };

  std::vector<RawPower> powers;
  std::vector<RawComm> comms;
  while (t.kind != Token::End) {
    expect_sym(";");
    if (t.kind == Token::End) break;  // trailing separator
    if (t.kind == Token::Sym && t.text == "[") {
      Token here = t;
      t = lx.next();
      std::string a = expect_ident("generator in commutator");
      expect_sym(",");
      std::string b = expect_ident("generator in commutator");
      expect_sym("]");
      expect_sym("=");
      RawComm rc{a, b, parse_word(), here};
      comms.push_back(std::move(rc));
    } else {
      Token here = t;
      std::string g = expect_ident("generator");
      expect_sym("^");
      if (t.kind != Token::Number) err_at(t, "expected exponent");
      u32 k = t.value;
      t = lx.next();
      expect_sym("=");
      RawPower rp{g, k, parse_word(), here};
      powers.push_back(std::move(rp));
    }
  }

  PcPresentation pres;
  pres.p = p;
  pres.names = names;
  u32 n = (u32)names.size();
  pres.rel_order.assign(n, p);
  pres.power.assign(n, {});
  pres.comm.resize(n);
  for (u32 i = 0; i < n; i++) pres.comm[i].resize(i);

  auto gen_index = [&](const RawLetter& l) {
    auto it = index.find(l.name);
    if (it == index.end()) err_at(l.tok, "unknown generator '" + l.name + "'");
    return it->second;
  };

  std::vector<char> have_power(n, 0);
  for (const RawPower& rp : powers) {
    auto it = index.find(rp.gen);
    if (it == index.end()) err_at(rp.tok, "unknown generator '" + rp.gen + "'");
    u32 i = it->second;
    if (have_power[i]) err_at(rp.tok, "duplicate power relation for '" + rp.gen + "'");
    have_power[i] = 1;
    u32 q = rp.k;
    while (q > 1 && q % p == 0) q /= p;
    if (q != 1 || rp.k < p)
      err_at(rp.tok, "relative order must be a power of p at least p");
    pres.rel_order[i] = rp.k;
  }

  // Words can only be materialized once every relative order is known.
  auto build_word = [&](const RawWord& rw, u32 above, const Token& where) {
    Word w;
    u32 prev = 0;
    bool first = true;
    for (const RawLetter& l : rw) {
      u32 g = gen_index(l);
      if (g <= above)
        err_at(where, "relation targets generator '" + names[g] +
                          "' of lower or equal index; right-hand sides must "
                          "use strictly higher generators");
      if (!first && g <= prev)
        err_at(l.tok, "word generators must appear in ascending index order");
      u32 e = l.exp % pres.rel_order[g];
      if (e) w.push_back({g, e});
      prev = g;
      first = false;
    }
    return w;
  };

  for (const RawPower& rp : powers) {
    u32 i = index[rp.gen];
    pres.power[i] = build_word(rp.rhs, i, rp.tok);
  }

  for (const RawComm& rc : comms) {
    auto ia = index.find(rc.a), ib = index.find(rc.b);
    if (ia == index.end()) err_at(rc.tok, "unknown generator '" + rc.a + "'");
    if (ib == index.end()) err_at(rc.tok, "unknown generator '" + rc.b + "'");
    u32 a = ia->second, b = ib->second;
    if (a == b) err_at(rc.tok, "commutator of a generator with itself");
    if (a > b) {
      Word w = build_word(rc.rhs, a, rc.tok);
      if (!pres.comm[a][b].empty())
        err_at(rc.tok, "duplicate commutator relation");
      pres.comm[a][b] = w;
    } else {
      // [a,b] = w with a lower: store [b,a] = w^-1.  Only a single
      // generator power with trivial power relation can be inverted
      // syntactically.
      Word w = build_word(rc.rhs, b, rc.tok);
      if (!pres.comm[b][a].empty())
        err_at(rc.tok, "duplicate commutator relation");
      if (w.empty()) continue;
      if (w.size() != 1 || !pres.power[w[0].gen].empty())
        err_at(rc.tok,
               "cannot invert [" + rc.a + "," + rc.b +
                   "]: right-hand side must be a single generator power with "
                   "trivial power relation, or swap to [" + rc.b + "," + rc.a + "]");
      u32 g = w[0].gen, r = pres.rel_order[g];
      pres.comm[b][a] = {{g, r - w[0].exp}};
    }
  }

  pres.validate();
  return pres;
}

}  // namespace twistclass

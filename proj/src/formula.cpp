#include "opencore/formula.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>
#include <utility>

namespace opencore {

// ---------------------------------------------------------------------------
// Terms

Term Term::elem_var(std::string name) {
  Term t;
  t.kind_ = TermKind::ElemVar;
  t.name_ = std::move(name);
  return t;
}

Term Term::elem_lit(Rational value) {
  Term t;
  t.kind_ = TermKind::ElemLit;
  t.value_ = std::move(value);
  return t;
}

Term Term::set_var(std::string name) {
  Term t;
  t.kind_ = TermKind::SetVar;
  t.name_ = std::move(name);
  return t;
}

Term Term::set_lit(FiniteSetQ value) {
  Term t;
  t.kind_ = TermKind::SetLit;
  t.set_value_ = std::move(value);
  return t;
}

bool Term::operator==(const Term& o) const {
  if (kind_ != o.kind_) return false;
  switch (kind_) {
    case TermKind::ElemVar:
    case TermKind::SetVar:
      return name_ == o.name_;
    case TermKind::ElemLit:
      return value_ == o.value_;
    case TermKind::SetLit:
      return set_value_ == o.set_value_;
  }
  return false;
}

std::string Term::str() const {
  switch (kind_) {
    case TermKind::ElemVar:
    case TermKind::SetVar:
      return name_;
    case TermKind::ElemLit:
      return value_.str();
    case TermKind::SetLit: {
      std::string out = "(set";
      for (const auto& e : set_value_.elements()) out += " " + e.str();
      return out + ")";
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Node construction

FormulaRef Formula::raw(FormulaKind k, std::vector<FormulaRef> children, std::vector<Term> terms,
                        std::string var, SignGuard g) {
  auto f = std::make_shared<Formula>();
  f->kind_ = k;
  f->children_ = std::move(children);
  f->terms_ = std::move(terms);
  f->var_ = std::move(var);
  f->guard_ = g;
  return f;
}

FormulaRef Formula::truth() { return raw(FormulaKind::True, {}, {}, {}, SignGuard::None); }
FormulaRef Formula::falsity() { return raw(FormulaKind::False, {}, {}, {}, SignGuard::None); }

FormulaRef Formula::less(Term a, Term b) {
  return raw(FormulaKind::Less, {}, {std::move(a), std::move(b)}, {}, SignGuard::None);
}
FormulaRef Formula::equal(Term a, Term b) {
  return raw(FormulaKind::Equal, {}, {std::move(a), std::move(b)}, {}, SignGuard::None);
}
FormulaRef Formula::rel_a(Term a, Term b) {
  return raw(FormulaKind::RelA, {}, {std::move(a), std::move(b)}, {}, SignGuard::None);
}
FormulaRef Formula::membership(Term e, Term s) {
  return raw(FormulaKind::In, {}, {std::move(e), std::move(s)}, {}, SignGuard::None);
}
FormulaRef Formula::set_equal(Term a, Term b) {
  return raw(FormulaKind::SetEqual, {}, {std::move(a), std::move(b)}, {}, SignGuard::None);
}

FormulaRef Formula::negation(FormulaRef f) {
  if (f->kind() == FormulaKind::True) return falsity();
  if (f->kind() == FormulaKind::False) return truth();
  if (f->kind() == FormulaKind::Not) return f->child(0);
  return raw(FormulaKind::Not, {std::move(f)}, {}, {}, SignGuard::None);
}

FormulaRef Formula::conjunction(std::vector<FormulaRef> fs) {
  std::vector<FormulaRef> out;
  for (auto& f : fs) {
    if (f->kind() == FormulaKind::True) continue;
    if (f->kind() == FormulaKind::False) return falsity();
    if (f->kind() == FormulaKind::And) {
      for (const auto& c : f->children()) out.push_back(c);
    } else {
      out.push_back(std::move(f));
    }
  }
  if (out.empty()) return truth();
  if (out.size() == 1) return out[0];
  return raw(FormulaKind::And, std::move(out), {}, {}, SignGuard::None);
}

FormulaRef Formula::disjunction(std::vector<FormulaRef> fs) {
  std::vector<FormulaRef> out;
  for (auto& f : fs) {
    if (f->kind() == FormulaKind::False) continue;
    if (f->kind() == FormulaKind::True) return truth();
    if (f->kind() == FormulaKind::Or) {
      for (const auto& c : f->children()) out.push_back(c);
    } else {
      out.push_back(std::move(f));
    }
  }
  if (out.empty()) return falsity();
  if (out.size() == 1) return out[0];
  return raw(FormulaKind::Or, std::move(out), {}, {}, SignGuard::None);
}

FormulaRef Formula::implication(FormulaRef a, FormulaRef b) {
  if (a->kind() == FormulaKind::True) return b;
  if (a->kind() == FormulaKind::False) return truth();
  if (b->kind() == FormulaKind::True) return truth();
  if (b->kind() == FormulaKind::False) return negation(std::move(a));
  return raw(FormulaKind::Implies, {std::move(a), std::move(b)}, {}, {}, SignGuard::None);
}

FormulaRef Formula::exists(std::string var, SignGuard g, FormulaRef body) {
  if (body->kind() == FormulaKind::True || body->kind() == FormulaKind::False) return body;
  return raw(FormulaKind::Exists, {std::move(body)}, {}, std::move(var), g);
}
FormulaRef Formula::forall(std::string var, SignGuard g, FormulaRef body) {
  if (body->kind() == FormulaKind::True || body->kind() == FormulaKind::False) return body;
  return raw(FormulaKind::Forall, {std::move(body)}, {}, std::move(var), g);
}
FormulaRef Formula::exists_set(std::string var, FormulaRef body) {
  if (body->kind() == FormulaKind::True || body->kind() == FormulaKind::False) return body;
  return raw(FormulaKind::ExistsSet, {std::move(body)}, {}, std::move(var), SignGuard::None);
}
FormulaRef Formula::forall_set(std::string var, FormulaRef body) {
  if (body->kind() == FormulaKind::True || body->kind() == FormulaKind::False) return body;
  return raw(FormulaKind::ForallSet, {std::move(body)}, {}, std::move(var), SignGuard::None);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

const char* quantifier_head(FormulaKind k, SignGuard g) {
  switch (k) {
    case FormulaKind::Exists:
      return g == SignGuard::None ? "exists" : (g == SignGuard::Negative ? "exists-neg" : "exists-pos");
    case FormulaKind::Forall:
      return g == SignGuard::None ? "forall" : (g == SignGuard::Negative ? "forall-neg" : "forall-pos");
    case FormulaKind::ExistsSet:
      return "exists-set";
    case FormulaKind::ForallSet:
      return "forall-set";
    default:
      return "";
  }
}

void print_rec(std::string& out, const FormulaRef& f) {
  switch (f->kind()) {
    case FormulaKind::True:
      out += "true";
      return;
    case FormulaKind::False:
      out += "false";
      return;
    case FormulaKind::Less:
      out += "(< " + f->lhs().str() + " " + f->rhs().str() + ")";
      return;
    case FormulaKind::Equal:
    case FormulaKind::SetEqual:
      out += "(= " + f->lhs().str() + " " + f->rhs().str() + ")";
      return;
    case FormulaKind::RelA:
      out += "(A " + f->lhs().str() + " " + f->rhs().str() + ")";
      return;
    case FormulaKind::In:
      out += "(in " + f->lhs().str() + " " + f->rhs().str() + ")";
      return;
    case FormulaKind::Not:
      out += "(not ";
      print_rec(out, f->child(0));
      out += ")";
      return;
    case FormulaKind::And:
    case FormulaKind::Or:
      out += f->kind() == FormulaKind::And ? "(and" : "(or";
      for (const auto& c : f->children()) {
        out += " ";
        print_rec(out, c);
      }
      out += ")";
      return;
    case FormulaKind::Implies:
      out += "(imp ";
      print_rec(out, f->child(0));
      out += " ";
      print_rec(out, f->child(1));
      out += ")";
      return;
    case FormulaKind::Exists:
    case FormulaKind::Forall:
    case FormulaKind::ExistsSet:
    case FormulaKind::ForallSet:
      out += "(";
      out += quantifier_head(f->kind(), f->guard());
      out += " " + f->var() + " ";
      print_rec(out, f->child(0));
      out += ")";
      return;
  }
}

}  // namespace

std::string print_formula(const FormulaRef& f) {
  std::string out;
  print_rec(out, f);
  return out;
}

// ---------------------------------------------------------------------------
// Tokenizer and parser

namespace {

struct Token {
  enum Kind { LParen, RParen, Symbol, End } kind;
  std::string text;
  size_t pos;
};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '(') {
      out.push_back({Token::LParen, "(", i++});
    } else if (c == ')') {
      out.push_back({Token::RParen, ")", i++});
    } else {
      size_t start = i;
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != '(' &&
             text[i] != ')')
        ++i;
      out.push_back({Token::Symbol, std::string(text.substr(start, i - start)), start});
    }
  }
  out.push_back({Token::End, "", text.size()});
  return out;
}

bool looks_like_number(const std::string& s) {
  if (s.empty()) return false;
  size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
  return i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]));
}

const std::set<std::string>& reserved_words() {
  static const std::set<std::string> kReserved = {
      "not",      "and",        "or",         "imp",        "exists",     "forall",
      "exists-neg", "exists-pos", "forall-neg", "forall-pos", "exists-set", "forall-set",
      "set",      "in",         "A",          "true",       "false",      "<",
      "="};
  return kReserved;
}

bool valid_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')) return false;
  return !reserved_words().count(s);
}

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

  FormulaRef parse_top() {
    FormulaRef f = parse_formula();
    if (peek().kind != Token::End) fail("trailing input after formula");
    return f;
  }

 private:
  const Token& peek() const { return tokens_[idx_]; }
  Token take() { return tokens_[idx_++]; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().pos); }

  void expect_rparen() {
    if (take().kind != Token::RParen) {
      --idx_;
      fail("expected ')'");
    }
  }

  std::string parse_binder_name() {
    Token t = take();
    if (t.kind != Token::Symbol || !valid_identifier(t.text)) {
      --idx_;
      fail("expected variable name");
    }
    return t.text;
  }

  Term parse_term() {
    Token t = take();
    if (t.kind == Token::Symbol) {
      if (looks_like_number(t.text)) {
        try {
          return Term::elem_lit(Rational::parse(t.text));
        } catch (const std::invalid_argument& e) {
          --idx_;
          fail(e.what());
        }
      }
      if (!valid_identifier(t.text)) {
        --idx_;
        fail("invalid identifier '" + t.text + "'");
      }
      return Term::elem_var(t.text);  // sort resolved later
    }
    if (t.kind == Token::LParen) {
      Token head = take();
      if (head.kind != Token::Symbol || head.text != "set") {
        --idx_;
        fail("expected 'set' literal");
      }
      std::vector<Rational> elems;
      while (peek().kind == Token::Symbol) {
        Token e = take();
        if (!looks_like_number(e.text)) {
          --idx_;
          fail("set literal elements must be rationals");
        }
        try {
          elems.push_back(Rational::parse(e.text));
        } catch (const std::invalid_argument& ex) {
          --idx_;
          fail(ex.what());
        }
      }
      size_t at = peek().pos;
      expect_rparen();
      try {
        return Term::set_lit(FiniteSetQ(std::move(elems)));
      } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), at);
      }
    }
    --idx_;
    fail("expected term");
  }

  FormulaRef parse_formula() {
    Token t = take();
    if (t.kind == Token::Symbol) {
      if (t.text == "true") return Formula::truth();
      if (t.text == "false") return Formula::falsity();
      --idx_;
      fail("expected formula");
    }
    if (t.kind != Token::LParen) {
      --idx_;
      fail("expected formula");
    }
    Token head = take();
    if (head.kind != Token::Symbol) {
      --idx_;
      fail("expected operator");
    }
    const std::string& h = head.text;
    auto binary_atom = [&](FormulaKind k) {
      Term a = parse_term();
      Term b = parse_term();
      expect_rparen();
      return Formula::raw(k, {}, {std::move(a), std::move(b)}, {}, SignGuard::None);
    };
    if (h == "<") return binary_atom(FormulaKind::Less);
    if (h == "=") return binary_atom(FormulaKind::Equal);  // may become SetEqual after inference
    if (h == "A") return binary_atom(FormulaKind::RelA);
    if (h == "in") return binary_atom(FormulaKind::In);
    if (h == "not") {
      FormulaRef c = parse_formula();
      expect_rparen();
      return Formula::raw(FormulaKind::Not, {std::move(c)}, {}, {}, SignGuard::None);
    }
    if (h == "and" || h == "or") {
      std::vector<FormulaRef> cs;
      cs.push_back(parse_formula());
      while (peek().kind != Token::RParen && peek().kind != Token::End) cs.push_back(parse_formula());
      expect_rparen();
      return Formula::raw(h == "and" ? FormulaKind::And : FormulaKind::Or, std::move(cs), {}, {},
                          SignGuard::None);
    }
    if (h == "imp") {
      FormulaRef a = parse_formula();
      FormulaRef b = parse_formula();
      expect_rparen();
      return Formula::raw(FormulaKind::Implies, {std::move(a), std::move(b)}, {}, {}, SignGuard::None);
    }
    auto quantifier = [&](FormulaKind k, SignGuard g) {
      std::string v = parse_binder_name();
      FormulaRef body = parse_formula();
      expect_rparen();
      return Formula::raw(k, {std::move(body)}, {}, std::move(v), g);
    };
    if (h == "exists") return quantifier(FormulaKind::Exists, SignGuard::None);
    if (h == "forall") return quantifier(FormulaKind::Forall, SignGuard::None);
    if (h == "exists-neg") return quantifier(FormulaKind::Exists, SignGuard::Negative);
    if (h == "exists-pos") return quantifier(FormulaKind::Exists, SignGuard::Positive);
    if (h == "forall-neg") return quantifier(FormulaKind::Forall, SignGuard::Negative);
    if (h == "forall-pos") return quantifier(FormulaKind::Forall, SignGuard::Positive);
    if (h == "exists-set") return quantifier(FormulaKind::ExistsSet, SignGuard::None);
    if (h == "forall-set") return quantifier(FormulaKind::ForallSet, SignGuard::None);
    --idx_;
    fail("unknown operator '" + h + "'");
  }

  std::vector<Token> tokens_;
  size_t idx_ = 0;
};

// Sort inference for free variables: membership and order atoms constrain
// directly, equality atoms propagate.
class SortInference {
 public:
  void collect(const FormulaRef& f, std::map<std::string, Sort>& scope) {
    if (f->is_atom()) {
      collect_atom(f, scope);
      return;
    }
    if (f->is_quantifier()) {
      auto saved = scope.find(f->var()) != scope.end() ? std::optional<Sort>(scope[f->var()])
                                                       : std::nullopt;
      scope[f->var()] = f->bound_sort();
      collect(f->child(0), scope);
      if (saved)
        scope[f->var()] = *saved;
      else
        scope.erase(f->var());
      return;
    }
    for (const auto& c : f->children()) collect(c, scope);
  }

  Sort resolved(const std::string& name) const {
    auto it = sorts_.find(name);
    return it != sorts_.end() && it->second ? *it->second : Sort::Element;
  }

  void resolve() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& [a, b] : links_) {
        auto sa = sorts_[a], sb = sorts_[b];
        if (sa && !sb) {
          sorts_[b] = sa;
          changed = true;
        } else if (sb && !sa) {
          sorts_[a] = sb;
          changed = true;
        } else if (sa && sb && *sa != *sb) {
          throw SortError("conflicting sorts for variables '" + a + "' and '" + b + "'");
        }
      }
    }
  }

 private:
  std::optional<Sort> term_sort(const Term& t, const std::map<std::string, Sort>& scope) const {
    if (t.kind() == TermKind::ElemLit) return Sort::Element;
    if (t.kind() == TermKind::SetLit) return Sort::Set;
    auto it = scope.find(t.name());
    if (it != scope.end()) return it->second;
    auto f = sorts_.find(t.name());
    if (f != sorts_.end()) return f->second;
    return std::nullopt;
  }

  void constrain(const Term& t, Sort s, const std::map<std::string, Sort>& scope, const FormulaRef& atom) {
    if (t.kind() == TermKind::ElemLit) {
      if (s != Sort::Element) throw SortError("rational literal in set position in " + print_formula(atom));
      return;
    }
    if (t.kind() == TermKind::SetLit) {
      if (s != Sort::Set) throw SortError("set literal in element position in " + print_formula(atom));
      return;
    }
    auto it = scope.find(t.name());
    if (it != scope.end()) {
      if (it->second != s)
        throw SortError("variable '" + t.name() + "' used at the wrong sort in " + print_formula(atom));
      return;
    }
    auto& slot = sorts_[t.name()];
    if (slot && *slot != s)
      throw SortError("variable '" + t.name() + "' used at inconsistent sorts (see " + print_formula(atom) +
                      ")");
    slot = s;
  }

  void collect_atom(const FormulaRef& f, const std::map<std::string, Sort>& scope) {
    switch (f->kind()) {
      case FormulaKind::Less:
      case FormulaKind::RelA:
        constrain(f->lhs(), Sort::Element, scope, f);
        constrain(f->rhs(), Sort::Element, scope, f);
        return;
      case FormulaKind::In:
        constrain(f->lhs(), Sort::Element, scope, f);
        constrain(f->rhs(), Sort::Set, scope, f);
        return;
      case FormulaKind::Equal:
      case FormulaKind::SetEqual: {
        auto sa = term_sort(f->lhs(), scope), sb = term_sort(f->rhs(), scope);
        if (sa && sb) {
          if (*sa != *sb) throw SortError("equality between different sorts in " + print_formula(f));
        } else if (sa) {
          constrain(f->rhs(), *sa, scope, f);
        } else if (sb) {
          constrain(f->lhs(), *sb, scope, f);
        } else {
          links_.emplace_back(f->lhs().name(), f->rhs().name());
          sorts_.try_emplace(f->lhs().name());
          sorts_.try_emplace(f->rhs().name());
        }
        return;
      }
      default:
        return;
    }
  }

  std::map<std::string, std::optional<Sort>> sorts_;
  std::vector<std::pair<std::string, std::string>> links_;
};

struct ScopeEntry {
  Sort sort;
  std::string renamed;
};

// Applies resolved sorts, renames shadowed binders, and enforces per-atom
// sort rules (turning set-sorted "=" into SetEqual).
class Rebuilder {
 public:
  Rebuilder(const SortInference& inf, std::set<std::string> used) : inf_(inf), used_(std::move(used)) {}

  FormulaRef rebuild(const FormulaRef& f, std::map<std::string, ScopeEntry>& scope) {
    if (f->is_atom()) return rebuild_atom(f, scope);
    if (f->is_quantifier()) {
      std::string name = f->var();
      std::string target = name;
      if (scope.count(name)) {
        target = fresh_name(name, used_);
      }
      used_.insert(target);
      auto saved = scope.find(name) != scope.end() ? std::optional<ScopeEntry>(scope[name]) : std::nullopt;
      scope[name] = {f->bound_sort(), target};
      FormulaRef body = rebuild(f->child(0), scope);
      if (saved)
        scope[name] = *saved;
      else
        scope.erase(name);
      return Formula::raw(f->kind(), {std::move(body)}, {}, std::move(target), f->guard());
    }
    std::vector<FormulaRef> cs;
    cs.reserve(f->children().size());
    for (const auto& c : f->children()) cs.push_back(rebuild(c, scope));
    return Formula::raw(f->kind(), std::move(cs), {}, {}, f->guard());
  }

 private:
  Term rebuild_term(const Term& t, const std::map<std::string, ScopeEntry>& scope) {
    if (!t.is_var()) return t;
    auto it = scope.find(t.name());
    if (it != scope.end()) {
      return it->second.sort == Sort::Element ? Term::elem_var(it->second.renamed)
                                              : Term::set_var(it->second.renamed);
    }
    return inf_.resolved(t.name()) == Sort::Element ? Term::elem_var(t.name()) : Term::set_var(t.name());
  }

  FormulaRef rebuild_atom(const FormulaRef& f, const std::map<std::string, ScopeEntry>& scope) {
    if (f->kind() == FormulaKind::True || f->kind() == FormulaKind::False) return f;
    Term a = rebuild_term(f->lhs(), scope);
    Term b = rebuild_term(f->rhs(), scope);
    auto need = [&](const Term& t, Sort s) {
      if (t.sort() != s)
        throw SortError("term '" + t.str() + "' has the wrong sort in " + print_formula(f));
    };
    switch (f->kind()) {
      case FormulaKind::Less:
      case FormulaKind::RelA:
        need(a, Sort::Element);
        need(b, Sort::Element);
        return Formula::raw(f->kind(), {}, {std::move(a), std::move(b)}, {}, SignGuard::None);
      case FormulaKind::In:
        need(a, Sort::Element);
        need(b, Sort::Set);
        return Formula::membership(std::move(a), std::move(b));
      case FormulaKind::Equal:
      case FormulaKind::SetEqual: {
        if (a.sort() != b.sort())
          throw SortError("equality between different sorts in " + print_formula(f));
        FormulaKind k = a.sort() == Sort::Set ? FormulaKind::SetEqual : FormulaKind::Equal;
        return Formula::raw(k, {}, {std::move(a), std::move(b)}, {}, SignGuard::None);
      }
      default:
        return f;
    }
  }

  const SortInference& inf_;
  std::set<std::string> used_;
};

void collect_names(const FormulaRef& f, std::set<std::string>& out) {
  if (f->is_quantifier()) out.insert(f->var());
  for (const auto& t : f->terms())
    if (t.is_var()) out.insert(t.name());
  for (const auto& c : f->children()) collect_names(c, out);
}

}  // namespace

std::set<std::string> all_names(const FormulaRef& f) {
  std::set<std::string> out;
  collect_names(f, out);
  return out;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& used) {
  std::string candidate = base + "'";
  while (used.count(candidate)) candidate += "'";
  return candidate;
}

FormulaRef parse_formula(std::string_view text, Language lang) {
  Parser p(text);
  FormulaRef rawtree = p.parse_top();
  SortInference inf;
  std::map<std::string, Sort> scope;
  inf.collect(rawtree, scope);
  inf.resolve();
  Rebuilder rb(inf, all_names(rawtree));
  std::map<std::string, ScopeEntry> rscope;
  FormulaRef f = rb.rebuild(rawtree, rscope);
  check_language(f, lang);
  return f;
}

// ---------------------------------------------------------------------------
// Language checking

namespace {

void check_rec(const FormulaRef& f, Language lang) {
  switch (f->kind()) {
    case FormulaKind::RelA:
      if (lang == Language::Wmso) throw SortError("A-atom is not part of the weak monadic language");
      break;
    case FormulaKind::In:
    case FormulaKind::SetEqual:
      if (lang == Language::OrderA)
        throw SortError("set-sorted atom " + print_formula(f) + " is not part of the order language");
      break;
    case FormulaKind::ExistsSet:
    case FormulaKind::ForallSet:
      if (lang == Language::OrderA) throw SortError("set quantifier is not part of the order language");
      break;
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      if (lang == Language::Wmso && f->guard() != SignGuard::None)
        throw SortError("sign guards are not part of the weak monadic language");
      break;
    default:
      break;
  }
  for (const auto& t : f->terms()) {
    if (lang == Language::OrderA && t.sort() == Sort::Set)
      throw SortError("set-sorted term '" + t.str() + "' is not part of the order language");
    if (lang == Language::Wmso && t.kind() == TermKind::ElemLit && !t.value().is_positive())
      throw SortError("element literal " + t.value().str() + " is not a positive rational");
  }
  for (const auto& c : f->children()) check_rec(c, lang);
}

}  // namespace

void check_language(const FormulaRef& f, Language lang) { check_rec(f, lang); }

// ---------------------------------------------------------------------------
// Free variables, substitution, equality

namespace {

void free_vars_rec(const FormulaRef& f, std::map<std::string, Sort>& bound_depth,
                   std::set<SortedVar>& out) {
  for (const auto& t : f->terms())
    if (t.is_var() && !bound_depth.count(t.name())) out.insert({t.name(), t.sort()});
  if (f->is_quantifier()) {
    bool had = bound_depth.count(f->var()) > 0;
    Sort old = had ? bound_depth[f->var()] : Sort::Element;
    bound_depth[f->var()] = f->bound_sort();
    free_vars_rec(f->child(0), bound_depth, out);
    if (had)
      bound_depth[f->var()] = old;
    else
      bound_depth.erase(f->var());
    return;
  }
  for (const auto& c : f->children()) free_vars_rec(c, bound_depth, out);
}

Term substitute_term(const Term& t, const std::map<std::string, Term>& b) {
  if (!t.is_var()) return t;
  auto it = b.find(t.name());
  if (it == b.end()) return t;
  if (it->second.sort() != t.sort())
    throw SortError("substitution binds '" + t.name() + "' to a term of the wrong sort");
  return it->second;
}

FormulaRef substitute_rec(const FormulaRef& f, std::map<std::string, Term> b,
                          std::set<std::string>& used) {
  if (b.empty()) return f;
  if (f->is_atom()) {
    if (f->terms().empty()) return f;
    std::vector<Term> ts;
    ts.reserve(f->terms().size());
    for (const auto& t : f->terms()) ts.push_back(substitute_term(t, b));
    return Formula::raw(f->kind(), {}, std::move(ts), {}, SignGuard::None);
  }
  if (f->is_quantifier()) {
    b.erase(f->var());
    if (b.empty()) return f;
    // Avoid capture: rename the binder when any replacement mentions it.
    bool capture = false;
    for (const auto& [k, t] : b)
      if (t.is_var() && t.name() == f->var()) capture = true;
    std::string name = f->var();
    FormulaRef body = f->child(0);
    if (capture) {
      std::string fresh = fresh_name(name, used);
      used.insert(fresh);
      std::map<std::string, Term> rename{
          {name, f->bound_sort() == Sort::Element ? Term::elem_var(fresh) : Term::set_var(fresh)}};
      body = substitute_rec(body, rename, used);
      name = fresh;
    }
    return Formula::raw(f->kind(), {substitute_rec(body, b, used)}, {}, std::move(name), f->guard());
  }
  std::vector<FormulaRef> cs;
  cs.reserve(f->children().size());
  for (const auto& c : f->children()) cs.push_back(substitute_rec(c, b, used));
  return Formula::raw(f->kind(), std::move(cs), {}, {}, f->guard());
}

}  // namespace

std::set<SortedVar> free_variables(const FormulaRef& f) {
  std::set<SortedVar> out;
  std::map<std::string, Sort> bound;
  free_vars_rec(f, bound, out);
  return out;
}

FormulaRef substitute(const FormulaRef& f, const std::map<std::string, Term>& bindings) {
  std::set<std::string> used = all_names(f);
  for (const auto& [k, t] : bindings) {
    used.insert(k);
    if (t.is_var()) used.insert(t.name());
  }
  return substitute_rec(f, bindings, used);
}

bool structurally_equal(const FormulaRef& a, const FormulaRef& b) {
  if (a.get() == b.get()) return true;
  if (a->kind() != b->kind() || a->guard() != b->guard() || a->var() != b->var()) return false;
  if (a->terms() != b->terms()) return false;
  if (a->children().size() != b->children().size()) return false;
  for (size_t i = 0; i < a->children().size(); ++i)
    if (!structurally_equal(a->child(i), b->child(i))) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Collectors

namespace {

void collect_elem_lits(const FormulaRef& f, std::vector<Rational>& out) {
  for (const auto& t : f->terms())
    if (t.kind() == TermKind::ElemLit) out.push_back(t.value());
  for (const auto& c : f->children()) collect_elem_lits(c, out);
}

void collect_set_lits(const FormulaRef& f, std::vector<FiniteSetQ>& out) {
  for (const auto& t : f->terms())
    if (t.kind() == TermKind::SetLit) out.push_back(t.set_value());
  for (const auto& c : f->children()) collect_set_lits(c, out);
}

}  // namespace

std::vector<Rational> element_literals(const FormulaRef& f) {
  std::vector<Rational> out;
  collect_elem_lits(f, out);
  return out;
}

std::vector<FiniteSetQ> set_literals(const FormulaRef& f) {
  std::vector<FiniteSetQ> out;
  collect_set_lits(f, out);
  return out;
}

bool contains_kind(const FormulaRef& f, FormulaKind k) {
  if (f->kind() == k) return true;
  for (const auto& c : f->children())
    if (contains_kind(c, k)) return true;
  return false;
}

}  // namespace opencore

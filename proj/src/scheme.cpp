#include "horsmc/scheme.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "horsmc/error.hpp"

namespace horsmc {

int RecursionScheme::rule_index(const std::string& name) const {
  for (size_t i = 0; i < rules.size(); ++i)
    if (rules[i].name == name) return static_cast<int>(i);
  return -1;
}

namespace {

struct Token {
  enum class Kind { Ident, Equals, Dot, LParen, RParen, Lambda, End } kind;
  std::string text;
  int line, col;
};

bool ident_char(char c) {
  return isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

// Raw lambda-bearing expression, before lifting.
struct RawExpr;
using RawPtr = std::shared_ptr<RawExpr>;
struct RawExpr {
  enum class Kind { App, Ident, Lambda } kind;
  TypeId type = -1;
  RawPtr fun, arg;                   // App
  std::string name;                  // Ident
  int line = 0, col = 0;
  std::vector<std::string> lparams;  // Lambda
  std::vector<TypeId> lparam_types;  // filled during checking
  RawPtr body;
};

class SchemeParser {
 public:
  explicit SchemeParser(const std::string& text) : text_(text) {}

  RecursionScheme run() {
    split_directives();
    if (!have_terminals_) throw Error("scheme file: missing %terminals");
    if (!have_nonterminals_) throw Error("scheme file: missing %nonterminals");
    if (scheme_.start < 0) throw Error("scheme file: missing %start");
    lex_rules();
    parse_rules();
    if (!declared_only_.empty())
      throw Error("nonterminal '" + *declared_only_.begin() + "' has no rule");
    return std::move(scheme_);
  }

 private:
  void split_directives() {
    std::istringstream in(text_);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      std::string body = line;
      auto hash = body.find('#');
      if (hash != std::string::npos) body.erase(hash);
      size_t start = body.find_first_not_of(" \t\r");
      if (start == std::string::npos) continue;
      if (body[start] == '%') {
        std::string rest = body.substr(start);
        if (rest.rfind("%terminals", 0) == 0) {
          scheme_.terminals = RankedAlphabet::parse_decl(rest.substr(10), line_no);
          have_terminals_ = true;
        } else if (rest.rfind("%nonterminals", 0) == 0) {
          parse_nonterminal_decls(rest.substr(13), line_no);
          have_nonterminals_ = true;
        } else if (rest.rfind("%start", 0) == 0) {
          std::istringstream ss(rest.substr(6));
          std::string name;
          if (!(ss >> name)) throw ParseError(line_no, 1, "%start needs a nonterminal name");
          start_name_ = name;
        } else {
          throw ParseError(line_no, static_cast<int>(start) + 1, "unknown directive");
        }
      } else {
        rule_lines_.emplace_back(line_no, body);
      }
    }
    if (!start_name_.empty()) {
      scheme_.start = scheme_.rule_index(start_name_);
      if (scheme_.start < 0) throw Error("%start names unknown nonterminal '" + start_name_ + "'");
    }
  }

  void parse_nonterminal_decls(const std::string& body, int line_no) {
    std::istringstream ss(body);
    std::string item;
    while (ss >> item) {
      auto colon = item.find(':');
      if (colon == std::string::npos || colon == 0 || colon + 1 == item.size())
        throw ParseError(line_no, 1, "expected Name:type, got '" + item + "'");
      std::string name = item.substr(0, colon);
      if (scheme_.terminals.has(name))
        throw ParseError(line_no, 1, "nonterminal '" + name + "' clashes with a terminal");
      if (scheme_.rule_index(name) >= 0)
        throw ParseError(line_no, 1, "duplicate nonterminal '" + name + "'");
      RecursionScheme::Rule rule;
      rule.name = name;
      rule.type = types::parse(item.substr(colon + 1));
      scheme_.rules.push_back(std::move(rule));
      declared_only_.insert(name);
    }
  }

  void lex_rules() {
    for (const auto& [line_no, body] : rule_lines_) {
      size_t i = 0;
      while (i < body.size()) {
        char c = body[i];
        int col = static_cast<int>(i) + 1;
        if (isspace(static_cast<unsigned char>(c))) {
          ++i;
        } else if (c == '=') {
          tokens_.push_back({Token::Kind::Equals, "=", line_no, col});
          ++i;
        } else if (c == '.') {
          tokens_.push_back({Token::Kind::Dot, ".", line_no, col});
          ++i;
        } else if (c == '(') {
          tokens_.push_back({Token::Kind::LParen, "(", line_no, col});
          ++i;
        } else if (c == ')') {
          tokens_.push_back({Token::Kind::RParen, ")", line_no, col});
          ++i;
        } else if (c == '\\') {
          tokens_.push_back({Token::Kind::Lambda, "\\", line_no, col});
          ++i;
        } else if (ident_char(c) && !isdigit(static_cast<unsigned char>(c))) {
          size_t j = i;
          while (j < body.size() && ident_char(body[j])) ++j;
          tokens_.push_back({Token::Kind::Ident, body.substr(i, j - i), line_no, col});
          i = j;
        } else {
          throw ParseError(line_no, col, std::string("unexpected character '") + c + "'");
        }
      }
    }
    tokens_.push_back({Token::Kind::End, "", 0, 0});
  }

  const Token& peek() const { return tokens_[pos_]; }
  Token take() { return tokens_[pos_++]; }
  [[noreturn]] void fail(const Token& t, const std::string& msg) {
    throw ParseError(t.line, t.col, msg + " (got '" + t.text + "')");
  }

  void parse_rules() {
    while (peek().kind != Token::Kind::End) {
      Token head = take();
      if (head.kind != Token::Kind::Ident) fail(head, "expected a rule head");
      int rule = scheme_.rule_index(head.text);
      if (rule < 0) fail(head, "undeclared nonterminal '" + head.text + "'");
      if (scheme_.rules[rule].body) fail(head, "duplicate rule for '" + head.text + "'");
      std::vector<std::string> params;
      while (peek().kind == Token::Kind::Ident) params.push_back(take().text);
      if (peek().kind != Token::Kind::Equals) fail(peek(), "expected '='");
      take();
      RawPtr body = parse_expr();
      if (peek().kind != Token::Kind::Dot) fail(peek(), "expected '.' ending the rule");
      take();
      finish_rule(rule, head, std::move(params), std::move(body));
      declared_only_.erase(head.text);
    }
  }

  RawPtr parse_expr() {
    RawPtr e = parse_atom();
    if (!e) fail(peek(), "expected an expression");
    while (true) {
      RawPtr a = try_parse_atom();
      if (!a) return e;
      auto app = std::make_shared<RawExpr>();
      app->kind = RawExpr::Kind::App;
      app->fun = e;
      app->arg = a;
      app->line = e->line;
      app->col = e->col;
      e = app;
    }
  }

  RawPtr try_parse_atom() {
    const Token& t = peek();
    if (t.kind == Token::Kind::Ident || t.kind == Token::Kind::LParen) return parse_atom();
    return nullptr;
  }

  RawPtr parse_atom() {
    Token t = take();
    if (t.kind == Token::Kind::Ident) {
      auto e = std::make_shared<RawExpr>();
      e->kind = RawExpr::Kind::Ident;
      e->name = t.text;
      e->line = t.line;
      e->col = t.col;
      return e;
    }
    if (t.kind == Token::Kind::LParen) {
      RawPtr inner;
      if (peek().kind == Token::Kind::Lambda) {
        Token lam = take();
        auto e = std::make_shared<RawExpr>();
        e->kind = RawExpr::Kind::Lambda;
        e->line = lam.line;
        e->col = lam.col;
        while (peek().kind == Token::Kind::Ident) e->lparams.push_back(take().text);
        if (e->lparams.empty()) fail(peek(), "lambda needs at least one parameter");
        if (peek().kind != Token::Kind::Dot) fail(peek(), "expected '.' after lambda parameters");
        take();
        e->body = parse_expr();
        inner = e;
      } else {
        inner = parse_expr();
      }
      if (peek().kind != Token::Kind::RParen) fail(peek(), "expected ')'");
      take();
      return inner;
    }
    fail(t, "expected an expression");
  }

  // --- type checking and lambda lifting ---

  struct Binder {
    std::string name;
    TypeId type;
  };

  void finish_rule(int rule, const Token& head, std::vector<std::string> params, RawPtr body) {
    RecursionScheme::Rule& r = scheme_.rules[rule];
    auto spine = types::argument_spine(r.type);
    if (params.size() != spine.size())
      fail(head, "rule for '" + r.name + "' has " + std::to_string(params.size()) +
                     " parameters, its type expects " + std::to_string(spine.size()));
    std::set<std::string> seen;
    std::vector<Binder> env;
    for (size_t i = 0; i < params.size(); ++i) {
      if (scheme_.terminals.has(params[i]) || scheme_.rule_index(params[i]) >= 0)
        fail(head, "parameter '" + params[i] + "' shadows a symbol");
      if (!seen.insert(params[i]).second) fail(head, "duplicate parameter '" + params[i] + "'");
      env.push_back({params[i], spine[i]});
    }
    check(body, types::base(), env);
    r.params = std::move(params);
    r.body = lift(body, env);
  }

  TypeId infer(const RawPtr& e, std::vector<Binder>& env) {
    switch (e->kind) {
      case RawExpr::Kind::Ident: {
        for (auto it = env.rbegin(); it != env.rend(); ++it)
          if (it->name == e->name) return e->type = it->type;
        int f = scheme_.terminals.index_of(e->name);
        if (f >= 0) {
          TypeId t = types::base();
          for (int i = 0; i < scheme_.terminals.arity(f); ++i) t = types::arrow(types::base(), t);
          return e->type = t;
        }
        int nt = scheme_.rule_index(e->name);
        if (nt >= 0) return e->type = scheme_.rules[nt].type;
        throw ParseError(e->line, e->col, "unknown identifier '" + e->name + "'");
      }
      case RawExpr::Kind::App: {
        TypeId ft = infer(e->fun, env);
        if (types::is_base(ft))
          throw ParseError(e->line, e->col, "applying an expression of base type");
        check(e->arg, types::argument(ft), env);
        return e->type = types::result(ft);
      }
      case RawExpr::Kind::Lambda:
        throw ParseError(e->line, e->col,
                         "lambda in a position where its type cannot be determined");
    }
    throw std::logic_error("infer: bad kind");
  }

  void check(const RawPtr& e, TypeId expected, std::vector<Binder>& env) {
    if (e->kind == RawExpr::Kind::Lambda) {
      TypeId t = expected;
      for (const auto& p : e->lparams) {
        if (types::is_base(t))
          throw ParseError(e->line, e->col, "lambda has more parameters than its type allows");
        if (scheme_.terminals.has(p) || scheme_.rule_index(p) >= 0)
          throw ParseError(e->line, e->col, "parameter '" + p + "' shadows a symbol");
        for (const auto& b : env)
          if (b.name == p)
            throw ParseError(e->line, e->col, "parameter '" + p + "' shadows an outer binding");
        e->lparam_types.push_back(types::argument(t));
        t = types::result(t);
      }
      for (size_t i = 0; i < e->lparams.size(); ++i) env.push_back({e->lparams[i], e->lparam_types[i]});
      check(e->body, t, env);
      env.resize(env.size() - e->lparams.size());
      e->type = expected;
      return;
    }
    TypeId got = infer(e, env);
    if (got != expected)
      throw ParseError(e->line, e->col, "expected type " + types::to_string(expected) + ", got " +
                                            types::to_string(got));
  }

  // Replaces lambdas by applications of fresh nonterminals (innermost first)
  // and resolves identifiers. `env` lists the binders in scope.
  SchemeExprPtr lift(const RawPtr& e, std::vector<Binder>& env) {
    switch (e->kind) {
      case RawExpr::Kind::Ident: {
        auto out = std::make_shared<SchemeExpr>();
        out->type = e->type;
        out->name = e->name;
        for (size_t i = env.size(); i-- > 0;)
          if (env[i].name == e->name) {
            out->kind = SchemeExpr::Kind::Param;
            return out;
          }
        int f = scheme_.terminals.index_of(e->name);
        if (f >= 0) {
          out->kind = SchemeExpr::Kind::Term;
          out->index = f;
          return out;
        }
        out->kind = SchemeExpr::Kind::NonTerm;
        out->index = scheme_.rule_index(e->name);
        return out;
      }
      case RawExpr::Kind::App: {
        auto out = std::make_shared<SchemeExpr>();
        out->kind = SchemeExpr::Kind::App;
        out->type = e->type;
        out->fun = lift(e->fun, env);
        out->arg = lift(e->arg, env);
        return out;
      }
      case RawExpr::Kind::Lambda: {
        // captured = binders in scope that occur free in the body
        std::vector<Binder> inner = env;
        for (size_t i = 0; i < e->lparams.size(); ++i)
          inner.push_back({e->lparams[i], e->lparam_types[i]});
        SchemeExprPtr body = lift(e->body, inner);
        std::set<std::string> own(e->lparams.begin(), e->lparams.end());
        std::set<std::string> used;
        collect_params(body, used);
        std::vector<Binder> captured;
        for (const auto& b : env)
          if (used.count(b.name) && !own.count(b.name)) captured.push_back(b);
        // fresh closure nonterminal
        std::string base = "Cl" + std::to_string(closure_count_++);
        while (scheme_.rule_index(base) >= 0 || scheme_.terminals.has(base)) base += "_";
        RecursionScheme::Rule rule;
        rule.name = base;
        TypeId rtype = e->type;
        for (size_t i = captured.size(); i-- > 0;) rtype = types::arrow(captured[i].type, rtype);
        rule.type = rtype;
        for (const auto& b : captured) rule.params.push_back(b.name);
        for (const auto& p : e->lparams) rule.params.push_back(p);
        rule.body = body;
        scheme_.rules.push_back(std::move(rule));
        int nt = static_cast<int>(scheme_.rules.size()) - 1;
        auto head = std::make_shared<SchemeExpr>();
        head->kind = SchemeExpr::Kind::NonTerm;
        head->index = nt;
        head->name = scheme_.rules[nt].name;
        head->type = rtype;
        SchemeExprPtr result = head;
        TypeId t = rtype;
        for (const auto& b : captured) {
          auto app = std::make_shared<SchemeExpr>();
          app->kind = SchemeExpr::Kind::App;
          app->fun = result;
          auto arg = std::make_shared<SchemeExpr>();
          arg->kind = SchemeExpr::Kind::Param;
          arg->name = b.name;
          arg->type = b.type;
          app->arg = arg;
          t = types::result(t);
          app->type = t;
          result = app;
        }
        return result;
      }
    }
    throw std::logic_error("lift: bad kind");
  }

  static void collect_params(const SchemeExprPtr& e, std::set<std::string>& out) {
    if (!e) return;
    if (e->kind == SchemeExpr::Kind::Param) out.insert(e->name);
    collect_params(e->fun, out);
    collect_params(e->arg, out);
  }

  const std::string& text_;
  RecursionScheme scheme_;
  std::string start_name_;
  bool have_terminals_ = false, have_nonterminals_ = false;
  std::set<std::string> declared_only_;
  std::vector<std::pair<int, std::string>> rule_lines_;
  std::vector<Token> tokens_;
  size_t pos_ = 0;
  int closure_count_ = 0;
};

}  // namespace

RecursionScheme parse_scheme(const std::string& text) { return SchemeParser(text).run(); }

namespace {

// Re-derives the type of a lambda-free body given the parameter binding.
TypeId body_type(const RecursionScheme& s, const RecursionScheme::Rule& rule,
                 const SchemeExprPtr& e, std::vector<std::string>& errors) {
  switch (e->kind) {
    case SchemeExpr::Kind::Term: {
      if (e->index < 0 || e->index >= s.terminals.size()) {
        errors.push_back("rule " + rule.name + ": bad terminal reference");
        return -1;
      }
      TypeId t = types::base();
      for (int i = 0; i < s.terminals.arity(e->index); ++i) t = types::arrow(types::base(), t);
      return t;
    }
    case SchemeExpr::Kind::NonTerm:
      if (e->index < 0 || e->index >= static_cast<int>(s.rules.size())) {
        errors.push_back("rule " + rule.name + ": bad nonterminal reference");
        return -1;
      }
      return s.rules[e->index].type;
    case SchemeExpr::Kind::Param: {
      auto spine = types::argument_spine(rule.type);
      for (size_t i = 0; i < rule.params.size(); ++i)
        if (rule.params[i] == e->name) return spine[i];
      errors.push_back("rule " + rule.name + ": unknown parameter '" + e->name + "'");
      return -1;
    }
    case SchemeExpr::Kind::App: {
      TypeId ft = body_type(s, rule, e->fun, errors);
      TypeId at = body_type(s, rule, e->arg, errors);
      if (ft < 0 || at < 0) return -1;
      if (types::is_base(ft)) {
        errors.push_back("rule " + rule.name + ": applying an expression of base type");
        return -1;
      }
      if (types::argument(ft) != at) {
        errors.push_back("rule " + rule.name + ": ill-typed application (" +
                         types::to_string(types::argument(ft)) + " expected, " +
                         types::to_string(at) + " given)");
        return -1;
      }
      return types::result(ft);
    }
  }
  return -1;
}

}  // namespace

std::vector<std::string> validate_scheme(const RecursionScheme& s) {
  std::vector<std::string> errors;
  std::set<std::string> names;
  for (const auto& rule : s.rules) {
    if (!names.insert(rule.name).second) errors.push_back("duplicate nonterminal '" + rule.name + "'");
    if (!rule.body) {
      errors.push_back("nonterminal '" + rule.name + "' has no rule");
      continue;
    }
    if (rule.params.size() != static_cast<size_t>(types::arity(rule.type)))
      errors.push_back("rule " + rule.name + ": parameter count does not match its type");
    std::set<std::string> ps;
    for (const auto& p : rule.params)
      if (!ps.insert(p).second) errors.push_back("rule " + rule.name + ": duplicate parameter '" + p + "'");
    TypeId bt = body_type(s, rule, rule.body, errors);
    if (bt >= 0 && !types::is_base(bt))
      errors.push_back("rule " + rule.name + ": body is not of ground type");
  }
  if (s.start < 0 || s.start >= static_cast<int>(s.rules.size()))
    errors.push_back("missing start symbol");
  else if (!types::is_base(s.rules[s.start].type))
    errors.push_back("start symbol '" + s.rules[s.start].name + "' is not of ground type");
  return errors;
}

namespace {

void expr_to_text(const SchemeExprPtr& e, bool parens, std::string& out) {
  switch (e->kind) {
    case SchemeExpr::Kind::Term:
    case SchemeExpr::Kind::NonTerm:
    case SchemeExpr::Kind::Param:
      out += e->name;
      return;
    case SchemeExpr::Kind::App:
      if (parens) out += "(";
      expr_to_text(e->fun, false, out);
      out += " ";
      expr_to_text(e->arg, true, out);
      if (parens) out += ")";
      return;
  }
}

}  // namespace

std::string scheme_to_text(const RecursionScheme& s) {
  std::ostringstream out;
  out << s.terminals.to_decl() << "\n%nonterminals";
  for (const auto& rule : s.rules) out << " " << rule.name << ":" << types::to_string(rule.type);
  out << "\n%start " << s.rules[s.start].name << "\n";
  for (const auto& rule : s.rules) {
    out << rule.name;
    for (const auto& p : rule.params) out << " " << p;
    out << " = ";
    std::string body;
    expr_to_text(rule.body, false, body);
    out << body << ".\n";
  }
  return out.str();
}

namespace {

// Terminal and NonTerm expressions may legally be Term nodes or back-edges;
// a rule body that is a bare nonterminal is an alias and contributes no node.
int resolve_alias(const RecursionScheme& s, int rule, std::vector<int>& state) {
  // state: -1 unvisited, -2 in progress, >=0 resolved target rule
  if (state[rule] == -2) throw Error("alias cycle through nonterminal '" + s.rules[rule].name + "'");
  if (state[rule] >= 0) return state[rule];
  state[rule] = -2;
  const auto& body = s.rules[rule].body;
  int target = rule;
  if (s.rules[rule].params.empty() && body->kind == SchemeExpr::Kind::NonTerm)
    target = resolve_alias(s, body->index, state);
  state[rule] = target;
  return target;
}

}  // namespace

LambdaGraph to_lambda_graph(const RecursionScheme& s) {
  auto errors = validate_scheme(s);
  if (!errors.empty()) {
    std::string msg = "invalid scheme:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw Error(msg);
  }
  int nrules = static_cast<int>(s.rules.size());
  std::vector<int> alias(nrules, -1);
  for (int r = 0; r < nrules; ++r) resolve_alias(s, r, alias);

  LambdaGraph g;
  g.alphabet = s.terminals;
  // Pass 1: allocate the lambda spines (placeholders for nullary rules).
  std::vector<int> spine(nrules, -1);        // node the rule's occurrences point at
  std::vector<std::vector<int>> abs_chain(nrules);
  for (int r = 0; r < nrules; ++r) {
    if (alias[r] != r) continue;
    const auto& rule = s.rules[r];
    int k = static_cast<int>(rule.params.size());
    if (k == 0) {
      spine[r] = g.add({LambdaGraph::NodeKind::Term, types::base(), -1, -1, ""});  // placeholder
      continue;
    }
    TypeId t = rule.type;
    for (int i = 0; i < k; ++i) {
      abs_chain[r].push_back(g.abs(-1, t, rule.params[i]));
      t = types::result(t);
    }
    for (int i = 0; i + 1 < k; ++i) g.nodes[abs_chain[r][i]].a = abs_chain[r][i + 1];
    spine[r] = abs_chain[r][0];
  }
  for (int r = 0; r < nrules; ++r)
    if (alias[r] != r) spine[r] = spine[alias[r]];

  // Pass 2: translate rule bodies.
  std::function<int(const SchemeExprPtr&, const RecursionScheme::Rule&)> tr =
      [&](const SchemeExprPtr& e, const RecursionScheme::Rule& rule) -> int {
    switch (e->kind) {
      case SchemeExpr::Kind::Term:
        return g.term(e->index, e->type);
      case SchemeExpr::Kind::NonTerm:
        return spine[e->index];
      case SchemeExpr::Kind::Param: {
        int k = static_cast<int>(rule.params.size());
        for (int i = 0; i < k; ++i)
          if (rule.params[i] == e->name) return g.var(k - 1 - i, e->type);
        throw std::logic_error("unresolved parameter after validation");
      }
      case SchemeExpr::Kind::App:
        return g.app(tr(e->fun, rule), tr(e->arg, rule), e->type);
    }
    throw std::logic_error("bad expression kind");
  };
  for (int r = 0; r < nrules; ++r) {
    if (alias[r] != r) continue;
    const auto& rule = s.rules[r];
    int body = tr(rule.body, rule);
    if (rule.params.empty())
      g.nodes[spine[r]] = g.nodes[body];  // fill the placeholder
    else
      g.nodes[abs_chain[r].back()].a = body;
  }
  g.root = spine[s.start];

  LambdaGraph interned = intern(g);
  analyze(interned);
  if (!is_closed(interned)) throw Error("translated graph is not closed");
  if (!types::is_base(interned.nodes[interned.root].type))
    throw Error("translated graph is not of ground type");
  return interned;
}

}  // namespace horsmc

#include "horsmc/ctl.hpp"

#include <cctype>
#include <vector>

#include "horsmc/error.hpp"

namespace horsmc {

FormulaPtr SafetyFormula::make_letter(int f) {
  auto phi = std::make_shared<SafetyFormula>();
  phi->kind = Kind::Letter;
  phi->letter = f;
  return phi;
}

FormulaPtr SafetyFormula::make_not_letter(int f) {
  auto phi = std::make_shared<SafetyFormula>();
  phi->kind = Kind::NotLetter;
  phi->letter = f;
  return phi;
}

FormulaPtr SafetyFormula::make_or(FormulaPtr l, FormulaPtr r) {
  auto phi = std::make_shared<SafetyFormula>();
  phi->kind = Kind::Or;
  phi->left = std::move(l);
  phi->right = std::move(r);
  return phi;
}

FormulaPtr SafetyFormula::make_and(FormulaPtr l, FormulaPtr r) {
  auto phi = std::make_shared<SafetyFormula>();
  phi->kind = Kind::And;
  phi->left = std::move(l);
  phi->right = std::move(r);
  return phi;
}

FormulaPtr SafetyFormula::make_unary(Kind k, FormulaPtr f) {
  auto phi = std::make_shared<SafetyFormula>();
  phi->kind = k;
  phi->left = std::move(f);
  return phi;
}

namespace {

struct Token {
  enum class Kind { Ident, Or, And, Not, LParen, RParen, End } kind;
  std::string text;
  int col;
};

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    int col = static_cast<int>(i) + 1;
    if (isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '(') {
      out.push_back({Token::Kind::LParen, "(", col});
      ++i;
    } else if (c == ')') {
      out.push_back({Token::Kind::RParen, ")", col});
      ++i;
    } else if (c == '!') {
      out.push_back({Token::Kind::Not, "!", col});
      ++i;
    } else if (c == '\\' && i + 1 < text.size() && text[i + 1] == '/') {
      out.push_back({Token::Kind::Or, "\\/", col});
      i += 2;
    } else if (c == '/' && i + 1 < text.size() && text[i + 1] == '\\') {
      out.push_back({Token::Kind::And, "/\\", col});
      i += 2;
    } else if (isalnum(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < text.size() &&
             (isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_' || text[j] == '\''))
        ++j;
      out.push_back({Token::Kind::Ident, text.substr(i, j - i), col});
      i = j;
    } else {
      throw ParseError(1, col, std::string("unexpected character '") + c + "' in formula");
    }
  }
  out.push_back({Token::Kind::End, "", static_cast<int>(text.size()) + 1});
  return out;
}

class FormulaParser {
 public:
  FormulaParser(std::vector<Token> tokens, const RankedAlphabet& alpha)
      : tokens_(std::move(tokens)), alpha_(alpha) {}

  FormulaPtr parse() {
    FormulaPtr phi = parse_or();
    expect(Token::Kind::End, "end of formula");
    return phi;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  Token take() { return tokens_[pos_++]; }
  void expect(Token::Kind k, const std::string& what) {
    if (peek().kind != k)
      throw ParseError(1, peek().col, "expected " + what + ", got '" + peek().text + "'");
    ++pos_;
  }

  FormulaPtr parse_or() {
    FormulaPtr phi = parse_and();
    while (peek().kind == Token::Kind::Or) {
      take();
      phi = SafetyFormula::make_or(phi, parse_and());
    }
    return phi;
  }

  FormulaPtr parse_and() {
    FormulaPtr phi = parse_unary();
    while (peek().kind == Token::Kind::And) {
      take();
      phi = SafetyFormula::make_and(phi, parse_unary());
    }
    return phi;
  }

  FormulaPtr parse_unary() {
    const Token& t = peek();
    if (t.kind == Token::Kind::Not) {
      int col = t.col;
      take();
      FormulaPtr inner = parse_unary();
      if (inner->kind != SafetyFormula::Kind::Letter)
        throw ParseError(1, col, "negation applies to letters only");
      return SafetyFormula::make_not_letter(inner->letter);
    }
    if (t.kind == Token::Kind::Ident) {
      if (t.text == "EX" || t.text == "AX" || t.text == "EG" || t.text == "AG") {
        take();
        FormulaPtr inner = parse_unary();
        SafetyFormula::Kind k = t.text == "EX"   ? SafetyFormula::Kind::Ex
                                : t.text == "AX" ? SafetyFormula::Kind::Ax
                                : t.text == "EG" ? SafetyFormula::Kind::Eg
                                                 : SafetyFormula::Kind::Ag;
        return SafetyFormula::make_unary(k, inner);
      }
      take();
      int f = alpha_.index_of(t.text);
      if (f < 0) throw ParseError(1, t.col, "letter '" + t.text + "' is not in the alphabet");
      return SafetyFormula::make_letter(f);
    }
    if (t.kind == Token::Kind::LParen) {
      take();
      FormulaPtr phi = parse_or();
      expect(Token::Kind::RParen, "')'");
      return phi;
    }
    throw ParseError(1, t.col, "expected a formula, got '" + t.text + "'");
  }

  std::vector<Token> tokens_;
  const RankedAlphabet& alpha_;
  size_t pos_ = 0;
};

}  // namespace

FormulaPtr parse_formula(const std::string& text, const RankedAlphabet& alpha) {
  return FormulaParser(lex(text), alpha).parse();
}

std::string formula_to_string(const FormulaPtr& phi, const RankedAlphabet& alpha) {
  using K = SafetyFormula::Kind;
  switch (phi->kind) {
    case K::Letter:
      return alpha.name(phi->letter);
    case K::NotLetter:
      return "!" + alpha.name(phi->letter);
    case K::Or:
      return "(" + formula_to_string(phi->left, alpha) + " \\/ " +
             formula_to_string(phi->right, alpha) + ")";
    case K::And:
      return "(" + formula_to_string(phi->left, alpha) + " /\\ " +
             formula_to_string(phi->right, alpha) + ")";
    case K::Ex:
      return "EX " + formula_to_string(phi->left, alpha);
    case K::Ax:
      return "AX " + formula_to_string(phi->left, alpha);
    case K::Eg:
      return "EG " + formula_to_string(phi->left, alpha);
    case K::Ag:
      return "AG " + formula_to_string(phi->left, alpha);
  }
  return "?";
}

TrivialAutomaton compile_formula(const FormulaPtr& phi, const RankedAlphabet& alpha) {
  using K = SafetyFormula::Kind;
  switch (phi->kind) {
    case K::Letter:
      return letter_automaton(alpha, phi->letter);
    case K::NotLetter: {
      // disjunction of the letter automata of all other letters
      std::optional<TrivialAutomaton> acc;
      for (int g = 0; g < alpha.size(); ++g) {
        if (g == phi->letter) continue;
        TrivialAutomaton lg = letter_automaton(alpha, g);
        acc = acc ? union_automaton(*acc, lg) : lg;
      }
      if (acc) return *acc;
      // single-letter alphabet: nothing else to accept
      TrivialAutomaton none;
      none.alphabet = alpha;
      none.states = {"q0"};
      none.initial = {0};
      none.init_delta();
      return none;
    }
    case K::Or:
      return union_automaton(compile_formula(phi->left, alpha), compile_formula(phi->right, alpha));
    case K::And:
      return intersection_automaton(compile_formula(phi->left, alpha),
                                    compile_formula(phi->right, alpha));
    case K::Ex:
      return lift_ex(compile_formula(phi->left, alpha));
    case K::Ax:
      return lift_ax(compile_formula(phi->left, alpha));
    case K::Eg:
      return lift_eg(compile_formula(phi->left, alpha));
    case K::Ag:
      return lift_ag(compile_formula(phi->left, alpha));
  }
  throw std::logic_error("compile_formula: bad kind");
}

}  // namespace horsmc

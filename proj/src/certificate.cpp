#include <sstream>

#include "horsmc/proof.hpp"

namespace horsmc {

namespace {

const char* witness_keyword(const LambdaGraph& g, int node) {
  switch (g.nodes[node].kind) {
    case LambdaGraph::NodeKind::App:
      return "app";
    case LambdaGraph::NodeKind::Abs:
      return "lam";
    case LambdaGraph::NodeKind::Var:
      return "var";
    case LambdaGraph::NodeKind::Term:
      return "term";
  }
  return "?";
}

void skip_ws(const std::string& s, size_t& pos) {
  while (pos < s.size() && isspace(static_cast<unsigned char>(s[pos]))) ++pos;
}

bool eat(const std::string& s, size_t& pos, const std::string& token) {
  skip_ws(s, pos);
  if (s.compare(pos, token.size(), token) == 0) {
    pos += token.size();
    return true;
  }
  return false;
}

[[noreturn]] void fail(int line, const std::string& msg) { throw ParseError(line, 1, msg); }

}  // namespace

std::string certificate_to_text(const LambdaGraph& g, const TrivialAutomaton& a,
                                const Certificate& cert) {
  std::ostringstream out;
  out << "%state " << a.states[cert.state] << "\n";
  for (const auto& e : cert.entries) {
    out << "node " << e.node << " | ";
    for (size_t i = 0; i < e.ctx.size(); ++i) {
      if (i) out << ", ";
      out << g.free_var_names[e.node][i] << "=" << sem::display(e.ctx[i], a.states);
    }
    out << " |- " << sem::display(e.value, a.states);
    out << " ; " << witness_keyword(g, e.node);
    const auto& node = g.nodes[e.node];
    if (node.kind == LambdaGraph::NodeKind::App) {
      out << " f= " << sem::display(e.app_f, a.states) << " u= " << sem::display(e.app_u, a.states);
    } else if (node.kind == LambdaGraph::NodeKind::Abs) {
      for (size_t i = 0; i < e.family.size(); ++i) {
        out << (i ? ", " : " ") << sem::display(e.family[i].first, a.states) << " => "
            << sem::display(e.family[i].second, a.states);
      }
    }
    out << "\n";
  }
  return out.str();
}

Certificate parse_certificate(const std::string& text, const LambdaGraph& g,
                              const TrivialAutomaton& a) {
  if (!g.analyzed) throw Error("parse_certificate: graph not analyzed");
  Certificate cert;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    size_t pos = 0;
    skip_ws(line, pos);
    if (pos == line.size() || line[pos] == '#') continue;
    if (eat(line, pos, "%state")) {
      skip_ws(line, pos);
      std::string name = line.substr(pos);
      while (!name.empty() && isspace(static_cast<unsigned char>(name.back()))) name.pop_back();
      int q = a.state_index(name);
      if (q < 0) fail(line_no, "unknown state '" + name + "'");
      cert.state = q;
      continue;
    }
    if (eat(line, pos, "%scheme") || eat(line, pos, "%automaton")) continue;  // informational
    if (!eat(line, pos, "node")) fail(line_no, "expected a 'node' entry");
    skip_ws(line, pos);
    size_t num_start = pos;
    while (pos < line.size() && isdigit(static_cast<unsigned char>(line[pos]))) ++pos;
    if (num_start == pos) fail(line_no, "expected a node id");
    int node = std::stoi(line.substr(num_start, pos - num_start));
    if (node < 0 || node >= static_cast<int>(g.nodes.size()))
      fail(line_no, "node id out of range");
    if (!eat(line, pos, "|")) fail(line_no, "expected '|' before the context");
    CertEntry e;
    e.node = node;
    const auto& fv_types = g.free_var_types[node];
    for (size_t i = 0; i < fv_types.size(); ++i) {
      if (i && !eat(line, pos, ",")) fail(line_no, "expected ',' between context entries");
      skip_ws(line, pos);
      size_t name_start = pos;
      while (pos < line.size() && line[pos] != '=') ++pos;
      if (pos == line.size()) fail(line_no, "expected 'name=value' in the context");
      ++pos;  // '='
      (void)name_start;  // display names are not significant
      try {
        e.ctx.push_back(sem::parse_value_at(line, pos, fv_types[i], a.states));
      } catch (const Error& err) {
        fail(line_no, err.what());
      }
    }
    if (!eat(line, pos, "|-")) fail(line_no, "expected '|-' before the value");
    try {
      e.value = sem::parse_value_at(line, pos, g.nodes[node].type, a.states);
    } catch (const Error& err) {
      fail(line_no, err.what());
    }
    if (!eat(line, pos, ";")) fail(line_no, "expected ';' before the witnesses");
    skip_ws(line, pos);
    const auto& nd = g.nodes[node];
    try {
      if (eat(line, pos, "app")) {
        if (nd.kind != LambdaGraph::NodeKind::App) fail(line_no, "witness kind mismatch");
        if (!eat(line, pos, "f=")) fail(line_no, "expected 'f='");
        TypeId ftype = g.nodes[nd.a].type;
        e.app_f = sem::parse_value_at(line, pos, ftype, a.states);
        if (!eat(line, pos, "u=")) fail(line_no, "expected 'u='");
        e.app_u = sem::parse_value_at(line, pos, g.nodes[nd.b].type, a.states);
      } else if (eat(line, pos, "lam")) {
        if (nd.kind != LambdaGraph::NodeKind::Abs) fail(line_no, "witness kind mismatch");
        skip_ws(line, pos);
        bool first = true;
        while (pos < line.size()) {
          if (!first && !eat(line, pos, ",")) fail(line_no, "expected ',' in the family");
          first = false;
          ValuePtr arg = sem::parse_value_at(line, pos, g.binder_type(node), a.states);
          if (!eat(line, pos, "=>")) fail(line_no, "expected '=>' in the family");
          ValuePtr res = sem::parse_value_at(line, pos, g.nodes[nd.a].type, a.states);
          e.family.emplace_back(arg, res);
          skip_ws(line, pos);
        }
      } else if (eat(line, pos, "var")) {
        if (nd.kind != LambdaGraph::NodeKind::Var) fail(line_no, "witness kind mismatch");
      } else if (eat(line, pos, "term")) {
        if (nd.kind != LambdaGraph::NodeKind::Term) fail(line_no, "witness kind mismatch");
      } else {
        fail(line_no, "unknown witness keyword");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& err) {
      fail(line_no, err.what());
    }
    skip_ws(line, pos);
    if (pos != line.size()) fail(line_no, "trailing text '" + line.substr(pos) + "'");
    cert.entries.push_back(std::move(e));
  }
  if (cert.state < 0) throw Error("certificate: missing %state");
  return cert;
}

}  // namespace horsmc

#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "xtrio/check.hpp"
#include "xtrio/derived.hpp"
#include "xtrio/error.hpp"
#include "xtrio/formula.hpp"
#include "xtrio/lexer.hpp"

namespace xtrio {

enum class VarClass { input, output, local };

struct SfVariable {
  std::string name;
  VarClass cls = VarClass::local;
  std::vector<std::string> domain;
};

struct SfAssign {
  std::string var;
  std::string value;
};

/// Boolean combination of `var = value` comparisons.
struct Guard {
  enum class Kind { True, Eq, Not, And, Or } kind = Kind::True;
  std::string var;
  std::string value;
  std::vector<Guard> args;

  static Guard always() { return {}; }
};

struct SfState {
  std::string name;
  std::vector<SfAssign> entry;
  std::vector<SfAssign> exit;
};

struct SfTransition {
  std::string src;
  std::string dst;
  Guard guard;
  std::vector<SfAssign> actions;
  int line = 0;
};

struct SfModel {
  std::string name;
  std::vector<SfVariable> vars;
  std::vector<SfState> states;
  std::vector<SfTransition> transitions;
  std::string initial_state;
  std::map<std::string, std::string> initial_values;

  const SfVariable* find_var(std::string_view v) const {
    for (const auto& x : vars)
      if (x.name == v) return &x;
    return nullptr;
  }
  bool has_state(std::string_view s) const {
    return std::any_of(states.begin(), states.end(), [&](const SfState& x) { return x.name == s; });
  }
  const SfState& state(std::string_view s) const {
    for (const auto& x : states)
      if (x.name == s) return x;
    throw ValidationError("unknown state '" + std::string(s) + "' in model " + name);
  }
};

/// Value of `src` copied into input `dst` at every macro boundary.
struct SfLink {
  std::string src_model, src_var, dst_model, dst_var;
};

/// One or more machines running synchronously, optionally wired by links.
struct SfSystem {
  std::vector<SfModel> models;
  std::vector<SfLink> links;

  const SfModel& model(std::string_view n) const {
    for (const auto& m : models)
      if (m.name == n) return m;
    throw ValidationError("unknown model '" + std::string(n) + "'");
  }
};

// Atom naming shared by the compiler and property targets.
inline std::string state_atom_name(const SfModel& m) { return "s_" + m.name; }
inline Formula state_atom(const SfModel& m, const std::string& q) { return atom(state_atom_name(m) + "=" + q); }
inline Formula var_atom(const SfModel& m, const std::string& v, const std::string& x) {
  return atom(m.name + "." + v + "=" + x);
}

inline bool eval_guard(const Guard& g, const std::map<std::string, std::string>& val) {
  switch (g.kind) {
    case Guard::Kind::True: return true;
    case Guard::Kind::Eq: return val.at(g.var) == g.value;
    case Guard::Kind::Not: return !eval_guard(g.args[0], val);
    case Guard::Kind::And: return eval_guard(g.args[0], val) && eval_guard(g.args[1], val);
    case Guard::Kind::Or: return eval_guard(g.args[0], val) || eval_guard(g.args[1], val);
  }
  return false;
}

inline void guard_vars(const Guard& g, std::set<std::string>& out) {
  if (g.kind == Guard::Kind::Eq) out.insert(g.var);
  for (const auto& a : g.args) guard_vars(a, out);
}

inline Formula guard_formula(const SfModel& m, const Guard& g) {
  switch (g.kind) {
    case Guard::Kind::True: return truth();
    case Guard::Kind::Eq: return var_atom(m, g.var, g.value);
    case Guard::Kind::Not: return neg(guard_formula(m, g.args[0]));
    case Guard::Kind::And: return conj(guard_formula(m, g.args[0]), guard_formula(m, g.args[1]));
    case Guard::Kind::Or: return disj(guard_formula(m, g.args[0]), guard_formula(m, g.args[1]));
  }
  throw InternalError("unknown guard kind");
}

namespace detail {

class ModelParser {
 public:
  explicit ModelParser(std::string_view text) : ts_(Lexer(text).tokenize()) {}

  SfSystem parse() {
    SfSystem sys;
    std::vector<std::pair<SfLink, Token>> links;
    while (!ts_.at_end()) {
      const Token& t = ts_.peek();
      if (t.kind != TokenKind::Ident) ts_.fail("expected a declaration");
      const std::string kw = t.text;
      if (kw == "model") {
        ts_.take();
        sys.models.emplace_back();
        sys.models.back().name = ident("a model name");
        locs_.emplace_back();
        continue;
      }
      if (kw == "link") {
        const Token at = ts_.take();
        links.emplace_back(link(), at);
        continue;
      }
      if (sys.models.empty()) ts_.fail("expected 'model' first");
      SfModel& m = sys.models.back();
      if (kw == "input" || kw == "output" || kw == "local") variable(m);
      else if (kw == "state") state(m);
      else if (kw == "initial") initial(m);
      else if (kw == "trans") transition(m);
      else if (kw == "during") fail_during();
      else ts_.fail("unknown declaration");
    }
    if (sys.models.empty()) throw ParseError("no model declared", 1, 1);
    for (std::size_t i = 0; i < sys.models.size(); ++i) validate(sys.models[i], locs_[i]);
    for (auto& [l, at] : links) sys.links.push_back(check_link(sys, l, at));
    return sys;
  }

 private:
  struct Locations {
    std::map<std::string, Token> names;
    std::optional<Token> initial;
  };

  [[noreturn]] void fail_during() const {
    const Token& t = ts_.peek();
    throw ParseError("during actions are unsupported", t.line, t.column);
  }

  std::string ident(std::string_view what) {
    const Token& t = ts_.peek();
    if (t.kind != TokenKind::Ident || is_reserved_word(t.text) || t.text.find('.') != std::string::npos)
      ts_.fail("expected " + std::string(what));
    return ts_.take().text;
  }

  std::string value() {
    const Token& t = ts_.peek();
    if (t.kind != TokenKind::Ident && t.kind != TokenKind::Int) ts_.fail("expected a value");
    if (t.kind == TokenKind::Ident && t.text.find('.') != std::string::npos) ts_.fail("expected a value");
    return ts_.take().text;
  }

  void declare(SfModel&, const std::string& name, const Token& at) {
    auto& names = locs_.back().names;
    if (names.count(name)) throw ParseError("duplicate name '" + name + "'", at.line, at.column);
    names.emplace(name, at);
  }

  void variable(SfModel& m) {
    const std::string kw = ts_.take().text;
    const Token at = ts_.peek();
    SfVariable v;
    v.name = ident("a variable name");
    v.cls = kw == "input" ? VarClass::input : kw == "output" ? VarClass::output : VarClass::local;
    ts_.expect_punct(":");
    if (ts_.accept_word("bool")) {
      v.domain = {"false", "true"};
    } else {
      ts_.expect_punct("{");
      do {
        const Token vt = ts_.peek();
        std::string x = value();
        if (std::find(v.domain.begin(), v.domain.end(), x) != v.domain.end())
          throw ParseError("duplicate value '" + x + "'", vt.line, vt.column);
        v.domain.push_back(std::move(x));
      } while (ts_.accept_punct(","));
      ts_.expect_punct("}");
    }
    declare(m, v.name, at);
    m.vars.push_back(std::move(v));
  }

  std::vector<SfAssign> block() {
    std::vector<SfAssign> out;
    ts_.expect_punct("{");
    while (!ts_.is_punct("}")) {
      out.push_back(assignment());
      if (!ts_.accept_punct(";") && !ts_.is_punct("}")) ts_.fail("expected ';' or '}'");
    }
    ts_.expect_punct("}");
    return out;
  }

  SfAssign assignment() {
    SfAssign a;
    a.var = ident("a variable name");
    ts_.expect_punct(":=");
    a.value = value();
    return a;
  }

  void state(SfModel& m) {
    ts_.take();
    const Token at = ts_.peek();
    SfState s;
    s.name = ident("a state name");
    if (ts_.accept_punct("{")) {
      while (!ts_.accept_punct("}")) {
        if (ts_.is_word("during")) fail_during();
        if (ts_.accept_word("entry")) {
          auto b = block();
          s.entry.insert(s.entry.end(), b.begin(), b.end());
        } else if (ts_.accept_word("exit")) {
          auto b = block();
          s.exit.insert(s.exit.end(), b.begin(), b.end());
        } else {
          ts_.fail("expected 'entry', 'exit' or '}'");
        }
      }
    }
    declare(m, "state " + s.name, at);
    m.states.push_back(std::move(s));
  }

  void initial(SfModel& m) {
    const Token at = ts_.take();
    if (locs_.back().initial) throw ParseError("duplicate 'initial' declaration", at.line, at.column);
    locs_.back().initial = at;
    m.initial_state = ident("a state name");
    if (ts_.accept_word("with")) {
      do {
        const Token vt = ts_.peek();
        const std::string v = ident("a variable name");
        ts_.expect_punct("=");
        if (m.initial_values.count(v)) throw ParseError("duplicate initial value for '" + v + "'", vt.line, vt.column);
        m.initial_values[v] = value();
      } while (ts_.accept_punct(","));
    }
  }

  Guard guard_or() {
    Guard g = guard_and();
    while (ts_.accept_punct("||")) g = Guard{Guard::Kind::Or, {}, {}, {g, guard_and()}};
    return g;
  }
  Guard guard_and() {
    Guard g = guard_unary();
    while (ts_.accept_punct("&&")) g = Guard{Guard::Kind::And, {}, {}, {g, guard_unary()}};
    return g;
  }
  Guard guard_unary() {
    if (ts_.accept_punct("!")) return Guard{Guard::Kind::Not, {}, {}, {guard_unary()}};
    if (ts_.accept_punct("(")) {
      Guard g = guard_or();
      ts_.expect_punct(")");
      return g;
    }
    if (ts_.accept_word("true")) return Guard::always();
    if (ts_.accept_word("false")) return Guard{Guard::Kind::Not, {}, {}, {Guard::always()}};
    Guard g;
    g.kind = Guard::Kind::Eq;
    g.var = ident("a variable name");
    bool negated = false;
    if (ts_.accept_punct("!=")) negated = true;
    else if (!ts_.accept_punct("=") && !ts_.accept_punct("==")) ts_.fail("expected '=' or '!='");
    g.value = value();
    return negated ? Guard{Guard::Kind::Not, {}, {}, {g}} : g;
  }

  void transition(SfModel& m) {
    ts_.take();
    SfTransition t;
    t.line = ts_.peek().line;
    t.src = ident("a source state");
    ts_.expect_punct("->");
    t.dst = ident("a target state");
    if (ts_.accept_word("when")) t.guard = guard_or();
    if (ts_.accept_word("do")) {
      do t.actions.push_back(assignment());
      while (ts_.accept_punct(","));
    }
    m.transitions.push_back(std::move(t));
  }

  SfLink link() {
    auto split = [&](const Token& t) {
      const auto dot = t.text.find('.');
      if (t.kind != TokenKind::Ident || dot == std::string::npos || t.text.find('.', dot + 1) != std::string::npos)
        throw ParseError("expected MODEL.VAR", t.line, t.column);
      return std::make_pair(t.text.substr(0, dot), t.text.substr(dot + 1));
    };
    SfLink l;
    std::tie(l.src_model, l.src_var) = split(ts_.take());
    ts_.expect_punct("->");
    std::tie(l.dst_model, l.dst_var) = split(ts_.take());
    return l;
  }

  static SfLink check_link(const SfSystem& sys, const SfLink& l, const Token& at) {
    auto fail = [&](const std::string& msg) { throw ParseError(msg, at.line, at.column); };
    const SfModel* sm = nullptr;
    const SfModel* dm = nullptr;
    for (const auto& m : sys.models) {
      if (m.name == l.src_model) sm = &m;
      if (m.name == l.dst_model) dm = &m;
    }
    if (!sm || !dm) fail("link refers to an undeclared model");
    const SfVariable* sv = sm->find_var(l.src_var);
    const SfVariable* dv = dm->find_var(l.dst_var);
    if (!sv || !dv) fail("link refers to an undeclared variable");
    if (dv->cls != VarClass::input) fail("link target " + l.dst_model + "." + l.dst_var + " is not an input");
    if (sv->cls == VarClass::input) fail("link source " + l.src_model + "." + l.src_var + " must not be an input");
    if (sv->domain != dv->domain) fail("linked variables have different domains");
    for (const auto& other : sys.links)
      if (other.dst_model == l.dst_model && other.dst_var == l.dst_var) fail("input linked twice");
    return l;
  }

  void validate(const SfModel& m, const Locations& loc) {
    auto where = [&](const std::string& key) {
      auto it = loc.names.find(key);
      return it == loc.names.end() ? std::pair{1, 1} : std::pair{it->second.line, it->second.column};
    };
    auto fail_at = [](const std::string& msg, int line) { throw ParseError(msg, line, 1); };
    if (m.states.empty()) fail_at("model " + m.name + " has no states", 1);
    if (!loc.initial) fail_at("model " + m.name + " has no 'initial' declaration", 1);
    const int init_line = loc.initial->line;
    if (!m.has_state(m.initial_state)) fail_at("unknown initial state '" + m.initial_state + "'", init_line);

    auto check_assign = [&](const SfAssign& a, int line) {
      const SfVariable* v = m.find_var(a.var);
      if (!v) fail_at("undeclared variable '" + a.var + "'", line);
      if (v->cls == VarClass::input) fail_at("assignment to input variable '" + a.var + "'", line);
      if (std::find(v->domain.begin(), v->domain.end(), a.value) == v->domain.end())
        fail_at("value '" + a.value + "' is not in the domain of '" + a.var + "'", line);
    };
    for (const auto& s : m.states) {
      const int line = where("state " + s.name).first;
      for (const auto& a : s.entry) check_assign(a, line);
      for (const auto& a : s.exit) check_assign(a, line);
    }
    for (const auto& [v, x] : m.initial_values) {
      const SfVariable* var = m.find_var(v);
      if (!var) fail_at("undeclared variable '" + v + "'", init_line);
      if (var->cls == VarClass::input) fail_at("initial value given for input '" + v + "'", init_line);
      if (std::find(var->domain.begin(), var->domain.end(), x) == var->domain.end())
        fail_at("value '" + x + "' is not in the domain of '" + v + "'", init_line);
    }
    for (const auto& v : m.vars)
      if (v.cls != VarClass::input && !m.initial_values.count(v.name))
        fail_at("missing initial value for '" + v.name + "'", init_line);

    std::function<void(const Guard&, int)> check_guard = [&](const Guard& g, int line) {
      if (g.kind == Guard::Kind::Eq) {
        const SfVariable* v = m.find_var(g.var);
        if (!v) fail_at("undeclared variable '" + g.var + "'", line);
        if (std::find(v->domain.begin(), v->domain.end(), g.value) == v->domain.end())
          fail_at("value '" + g.value + "' is not in the domain of '" + g.var + "'", line);
      }
      for (const auto& a : g.args) check_guard(a, line);
    };
    for (const auto& t : m.transitions) {
      if (!m.has_state(t.src)) fail_at("unknown state '" + t.src + "'", t.line);
      if (!m.has_state(t.dst)) fail_at("unknown state '" + t.dst + "'", t.line);
      check_guard(t.guard, t.line);
      for (const auto& a : t.actions) check_assign(a, t.line);
    }
    check_determinism(m);
  }

  // Two transitions leaving the same state must never be enabled together.
  static void check_determinism(const SfModel& m) {
    for (std::size_t i = 0; i < m.transitions.size(); ++i) {
      for (std::size_t j = i + 1; j < m.transitions.size(); ++j) {
        const auto& a = m.transitions[i];
        const auto& b = m.transitions[j];
        if (a.src != b.src) continue;
        std::set<std::string> used;
        guard_vars(a.guard, used);
        guard_vars(b.guard, used);
        const std::vector<std::string> vars(used.begin(), used.end());
        std::vector<std::size_t> digit(vars.size(), 0);
        for (;;) {
          std::map<std::string, std::string> val;
          for (std::size_t v = 0; v < vars.size(); ++v) val[vars[v]] = m.find_var(vars[v])->domain[digit[v]];
          if (eval_guard(a.guard, val) && eval_guard(b.guard, val)) {
            std::string w;
            for (const auto& [k, x] : val) w += (w.empty() ? "" : ", ") + k + " = " + x;
            throw ValidationError("model " + m.name + " is not deterministic: transitions at lines " +
                                  std::to_string(a.line) + " and " + std::to_string(b.line) +
                                  " are both enabled in state " + a.src + (w.empty() ? "" : " when " + w));
          }
          std::size_t v = 0;
          while (v < vars.size() && ++digit[v] == m.find_var(vars[v])->domain.size()) digit[v++] = 0;
          if (v == vars.size()) break;
        }
      }
    }
  }

  TokenStream ts_;
  std::vector<Locations> locs_;
};

}  // namespace detail

/// Parses a ".sfm" file with one or more `model` sections and `link` lines.
inline SfSystem parse_system(std::string_view text) { return detail::ModelParser(text).parse(); }

/// Parses a file holding exactly one model.
inline SfModel parse_model(std::string_view text) {
  SfSystem sys = parse_system(text);
  if (sys.models.size() != 1 || !sys.links.empty())
    throw ValidationError("expected a single model without links");
  return std::move(sys.models.front());
}

namespace detail {

inline Formula exactly_one(const std::vector<Formula>& xs) {
  std::vector<Formula> parts{disj_all(xs)};
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j) parts.push_back(neg(conj(xs[i], xs[j])));
  return conj_all(parts);
}

inline Formula next_any(const Formula& f) { return disj(next_st(f), next_ns(f)); }

struct ModelParts {
  std::vector<Formula> invariants;
  std::vector<Formula> init;
  Formula stable;  // no transition of this model is enabled
};

inline ModelParts compile_parts(const SfModel& m) {
  ModelParts out;
  std::vector<Formula> state_atoms;
  for (const auto& s : m.states) state_atoms.push_back(state_atom(m, s.name));
  out.invariants.push_back(exactly_one(state_atoms));
  for (const auto& v : m.vars) {
    std::vector<Formula> xs;
    for (const auto& x : v.domain) xs.push_back(var_atom(m, v.name, x));
    out.invariants.push_back(exactly_one(xs));
  }

  std::vector<Formula> disabled;
  for (const auto& t : m.transitions) {
    const Formula enabled = conj(guard_formula(m, t.guard), state_atom(m, t.src));
    disabled.push_back(neg(enabled));
    // exit actions, then the transition's, then entry; the last write wins.
    std::map<std::string, std::string> written;
    for (const auto& a : m.state(t.src).exit) written[a.var] = a.value;
    for (const auto& a : t.actions) written[a.var] = a.value;
    for (const auto& a : m.state(t.dst).entry) written[a.var] = a.value;
    std::vector<Formula> effect{next_ns(state_atom(m, t.dst))};
    for (const auto& v : m.vars) {
      if (v.cls == VarClass::input) continue;
      if (auto it = written.find(v.name); it != written.end()) {
        effect.push_back(next_ns(var_atom(m, v.name, it->second)));
      } else {
        for (const auto& x : v.domain)
          effect.push_back(implies(var_atom(m, v.name, x), next_ns(var_atom(m, v.name, x))));
      }
    }
    out.invariants.push_back(implies(enabled, conj_all(effect)));
  }
  out.stable = conj_all(disabled);

  std::vector<Formula> nochange;
  for (const auto& v : m.vars) {
    if (v.cls == VarClass::input) continue;
    for (const auto& x : v.domain) nochange.push_back(implies(var_atom(m, v.name, x), next_any(var_atom(m, v.name, x))));
  }
  for (const auto& s : m.states) nochange.push_back(implies(state_atom(m, s.name), next_any(state_atom(m, s.name))));
  out.invariants.push_back(implies(out.stable, conj_all(nochange)));

  std::vector<Formula> hold;
  for (const auto& v : m.vars) {
    if (v.cls != VarClass::input) continue;
    for (const auto& x : v.domain) hold.push_back(implies(var_atom(m, v.name, x), next_ns(var_atom(m, v.name, x))));
  }
  if (!hold.empty()) out.invariants.push_back(implies(next_ns(truth()), conj_all(hold)));

  out.init.push_back(state_atom(m, m.initial_state));
  for (const auto& v : m.vars)
    if (v.cls != VarClass::input) out.init.push_back(var_atom(m, v.name, m.initial_values.at(v.name)));
  return out;
}

}  // namespace detail

/// SYS: initial configuration plus, under a single Alw, the micro-step
/// effects of every transition with frame conditions, no change while no
/// transition is enabled, time advancing exactly at stable configurations,
/// inputs held during micro-steps, one-hot encodings and link sampling.
inline Formula compile_system(const SfSystem& sys) {
  std::vector<Formula> invariants, init, stable;
  for (const auto& m : sys.models) {
    auto parts = detail::compile_parts(m);
    invariants.insert(invariants.end(), parts.invariants.begin(), parts.invariants.end());
    init.insert(init.end(), parts.init.begin(), parts.init.end());
    stable.push_back(parts.stable);
  }
  invariants.push_back(iff(conj_all(stable), next_st(truth())));
  for (const auto& l : sys.links) {
    const SfModel& sm = sys.model(l.src_model);
    const SfModel& dm = sys.model(l.dst_model);
    const SfVariable& v = *sm.find_var(l.src_var);
    std::vector<Formula> copy;
    for (const auto& x : v.domain)
      copy.push_back(implies(var_atom(sm, l.src_var, x), next_st(var_atom(dm, l.dst_var, x))));
    invariants.push_back(implies(next_st(truth()), conj_all(copy)));
    init.push_back(var_atom(dm, l.dst_var, sm.initial_values.at(l.src_var)));
  }
  init.push_back(alw(conj_all(invariants)));
  return conj_all(init);
}

inline Formula compile_model(const SfModel& m) { return compile_system(SfSystem{{m}, {}}); }

/// Every atom a formula over this system may mention.
inline std::set<std::string> system_atoms(const SfSystem& sys) {
  std::set<std::string> out;
  for (const auto& m : sys.models) {
    for (const auto& s : m.states) out.insert(state_atom_name(m) + "=" + s.name);
    for (const auto& v : m.vars)
      for (const auto& x : v.domain) out.insert(m.name + "." + v.name + "=" + x);
  }
  return out;
}

inline void check_atoms_known(const SfSystem& sys, const Formula& f) {
  const auto known = system_atoms(sys);
  for (const auto& a : atoms_of(f))
    if (!known.count(a)) throw ValidationError("unknown state or variable in '" + a + "'");
}

enum class PropertyKind { zeno, deadlock, within_stable, custom };

struct PropertySpec {
  PropertyKind kind = PropertyKind::custom;
  Formula target;                    // within_stable, custom
  unsigned long bound = 0;           // within_stable
  std::vector<std::string> components;  // deadlock; empty = all models
};

/// Som(Alw(Xns(true))): from some point on, time never advances again.
inline Formula zeno_property() { return som(alw(next_ns(truth()))); }

/// Every listed component eventually stays in one state at all stable points.
inline Formula deadlock_property(const SfSystem& sys, const std::vector<std::string>& components = {}) {
  std::vector<Formula> each;
  for (const auto& m : sys.models) {
    if (!components.empty() && std::find(components.begin(), components.end(), m.name) == components.end()) continue;
    std::vector<Formula> stuck;
    for (const auto& s : m.states) stuck.push_back(som_stable(alw_stable(state_atom(m, s.name))));
    each.push_back(disj_all(stuck));
  }
  return conj_all(each);
}

inline Formula build_property(const PropertySpec& p, const SfSystem& sys) {
  switch (p.kind) {
    case PropertyKind::zeno: return zeno_property();
    case PropertyKind::deadlock:
      for (const auto& c : p.components) sys.model(c);
      return deadlock_property(sys, p.components);
    case PropertyKind::within_stable:
      check_atoms_known(sys, p.target);
      return within_stable(p.target, p.bound);
    case PropertyKind::custom: check_atoms_known(sys, p.target); return p.target;
  }
  throw InternalError("unknown property kind");
}

inline Formula build_property(const PropertySpec& p, const SfModel& m) { return build_property(p, SfSystem{{m}, {}}); }

/// SYS && !Within_stable(target, L) has no run up to bound k.
inline bool within_holds(const Formula& sys_formula, const Formula& target, unsigned long bound, std::size_t k,
                         const SolveOptions& opts = {}) {
  return !check_xtrio(conj(sys_formula, neg(within_stable(target, bound))), k, opts).sat;
}

struct MinLResult {
  std::optional<unsigned long> value;
  std::vector<std::pair<unsigned long, bool>> probes;  // (L, holds) in query order
};

/// Smallest L <= max_l for which the property holds up to k, by binary
/// search over the monotone predicate.
inline MinLResult min_l_search(const SfSystem& sys, const Formula& target, unsigned long max_l, std::size_t k,
                               const SolveOptions& opts = {}) {
  if (k < 1) throw ValidationError("bound must be at least 1");
  check_atoms_known(sys, target);
  const Formula f = compile_system(sys);
  MinLResult r;
  auto holds = [&](unsigned long l) {
    const bool h = within_holds(f, target, l, k, opts);
    r.probes.emplace_back(l, h);
    return h;
  };
  if (!holds(max_l)) return r;
  unsigned long lo = 0, hi = max_l;
  while (lo < hi) {
    const unsigned long mid = lo + (hi - lo) / 2;
    if (holds(mid)) hi = mid;
    else lo = mid + 1;
  }
  r.value = lo;
  return r;
}

inline MinLResult min_l_search(const SfModel& m, const Formula& target, unsigned long max_l, std::size_t k,
                               const SolveOptions& opts = {}) {
  return min_l_search(SfSystem{{m}, {}}, target, max_l, k, opts);
}

}  // namespace xtrio

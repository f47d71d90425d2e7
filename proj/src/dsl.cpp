#include "deon/dsl.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <set>
#include <sstream>

namespace deon {

std::string ParseDiagnostic::str() const {
  std::ostringstream os;
  os << span.file << ':' << span.line << ':' << span.column << ": "
     << (severity == Severity::Error ? "error" : "warning") << '[' << code << "]: " << message;
  if (!expected.empty()) os << " (expected " << expected << ')';
  return os.str();
}

namespace {

enum class TokKind { Ident, Number, Punct, End };

struct Token {
  TokKind kind = TokKind::End;
  std::string text;
  SourceSpan span;
};

constexpr std::array kSectionKeywords = {
    "agents", "objects", "predicates", "plan", "physics", "belief", "on_universalized", "utility", "candidates",
};

constexpr std::array kReserved = {
    "scenario", "agents", "objects",  "predicates", "plan", "physics", "belief", "on_universalized",
    "utility",  "candidates", "not",  "and",        "or",   "forall",  "object", "true",
    "false",    "action",   "agent",  "reasons",    "given",
};

bool is_section_keyword(const Token& t) {
  return t.kind == TokKind::Ident &&
         std::find(kSectionKeywords.begin(), kSectionKeywords.end(), t.text) != kSectionKeywords.end();
}

bool is_reserved(std::string_view word) {
  return std::find(kReserved.begin(), kReserved.end(), word) != kReserved.end();
}

bool is_alpha(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ident_char(char c) { return is_alpha(c) || is_digit(c) || c == '_'; }

class Lexer {
public:
  Lexer(std::string_view text, std::string file, std::vector<ParseDiagnostic>& diags)
      : text_(text), file_(std::move(file)), diags_(diags) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      if (pos_ >= text_.size()) break;
      const auto start = here();
      const char c = text_[pos_];
      if (is_alpha(c)) {
        while (pos_ < text_.size() && is_ident_char(text_[pos_])) advance();
        out.push_back(finish(TokKind::Ident, start));
      } else if (is_digit(c) || (c == '-' && pos_ + 1 < text_.size() && is_digit(text_[pos_ + 1]))) {
        advance();
        digits();
        if (peek_is('.') && pos_ + 1 < text_.size() && is_digit(text_[pos_ + 1])) {
          advance();
          digits();
        }
        if (peek_is('/') && pos_ + 1 < text_.size() && is_digit(text_[pos_ + 1])) {
          advance();
          digits();
        }
        out.push_back(finish(TokKind::Number, start));
      } else if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
        advance();
        advance();
        out.push_back(finish(TokKind::Punct, start));
      } else if (std::string_view("{}(),;:=./").find(c) != std::string_view::npos) {
        advance();
        out.push_back(finish(TokKind::Punct, start));
      } else {
        advance();
        auto span = start;
        span.length = 1;
        std::string shown = (static_cast<unsigned char>(c) >= 0x20 && static_cast<unsigned char>(c) < 0x7f)
                                ? std::string("'") + c + "'"
                                : "byte 0x" + hex(static_cast<unsigned char>(c));
        diags_.push_back({span, Severity::Error, diag::kLexical, "unexpected character " + shown, ""});
      }
    }
    Token end;
    end.kind = TokKind::End;
    end.span = here();
    out.push_back(end);
    return out;
  }

private:
  static std::string hex(unsigned char c) {
    const char* digits = "0123456789abcdef";
    return {digits[c >> 4], digits[c & 15]};
  }

  bool peek_is(char c) const { return pos_ < text_.size() && text_[pos_] == c; }

  void digits() {
    while (pos_ < text_.size() && is_digit(text_[pos_])) advance();
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  SourceSpan here() const { return {file_, line_, col_, pos_, 0}; }

  Token finish(TokKind kind, SourceSpan span) const {
    span.length = pos_ - span.offset;
    return {kind, std::string(text_.substr(span.offset, span.length)), span};
  }

  std::string_view text_;
  std::string file_;
  std::vector<ParseDiagnostic>& diags_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

struct SyntaxError {
  ParseDiagnostic diagnostic;
};

class Parser {
public:
  Parser(std::vector<Token> tokens, const ParseOptions& options, ParseResult& result)
      : toks_(std::move(tokens)), options_(options), result_(result) {}

  Scenario run() {
    header();
    while (peek().kind != TokKind::End) {
      const auto before = pos_;
      try {
        section();
      } catch (const SyntaxError& e) {
        result_.diagnostics.push_back(e.diagnostic);
        recover(before);
      }
    }
    return std::move(s_);
  }

private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }

  bool at_punct(std::string_view p) const { return peek().kind == TokKind::Punct && peek().text == p; }
  bool at_keyword(std::string_view k) const { return peek().kind == TokKind::Ident && peek().text == k; }

  [[noreturn]] void fail(const Token& at, std::string message, std::string expected = "",
                         const char* code = diag::kSyntax) const {
    auto span = at.span;
    if (at.kind == TokKind::End) span.length = 0;
    throw SyntaxError{{span, Severity::Error, code, std::move(message), std::move(expected)}};
  }

  static std::string describe(const Token& t) {
    if (t.kind == TokKind::End) return "end of input";
    return "'" + t.text + "'";
  }

  void expect_punct(std::string_view p) {
    if (!at_punct(p)) fail(peek(), "unexpected " + describe(peek()), "'" + std::string(p) + "'");
    next();
  }

  void expect_keyword(std::string_view k) {
    if (!at_keyword(k)) fail(peek(), "unexpected " + describe(peek()), "'" + std::string(k) + "'");
    next();
  }

  const Token& identifier(std::string_view what) {
    const Token& t = peek();
    if (t.kind != TokKind::Ident) fail(t, "unexpected " + describe(t), std::string(what));
    if (is_reserved(t.text)) fail(t, "keyword '" + t.text + "' cannot be used as " + std::string(what), std::string(what));
    return next();
  }

  void duplicate(const Token& t, const std::string& what) {
    result_.diagnostics.push_back({t.span, Severity::Error, diag::kDuplicate, "duplicate " + what + " '" + t.text + "'", ""});
  }

  void mark(const std::string& element, const SourceSpan& span) { result_.spans.emplace(element, span); }

  SourceSpan span_since(std::size_t start) const {
    auto span = toks_[start].span;
    const auto& last = toks_[pos_ > start ? pos_ - 1 : start];
    span.length = last.span.offset + last.span.length - span.offset;
    return span;
  }

  void recover(std::size_t section_start) {
    if (pos_ == section_start && !is_section_keyword(peek())) next();
    while (peek().kind != TokKind::End && !is_section_keyword(peek())) next();
  }

  void header() {
    if (!at_keyword("scenario")) {
      result_.diagnostics.push_back(
          {peek().span, Severity::Error, diag::kSyntax, "expected scenario header", "'scenario <name>'"});
      recover(pos_);
      return;
    }
    mark("scenario", peek().span);
    next();
    try {
      s_.name = identifier("scenario name").text;
    } catch (const SyntaxError& e) {
      result_.diagnostics.push_back(e.diagnostic);
      recover(pos_);
    }
  }

  void section() {
    const Token& kw = peek();
    if (!is_section_keyword(kw)) {
      fail(kw, "unexpected " + describe(kw), "section keyword");
    }
    const std::string k = kw.text;
    next();
    if (k == "agents") {
      mark("agents", kw.span);
      name_list(s_.agents, "agent");
    } else if (k == "objects") {
      mark("objects", kw.span);
      name_list(s_.objects, "object");
    } else if (k == "predicates") {
      predicates();
    } else if (k == "plan") {
      plan();
    } else if (k == "physics") {
      const auto base = s_.constraints.physical.size();
      auto fs = formula_block();
      for (std::size_t i = 0; i < fs.size(); ++i) {
        mark("physics#" + std::to_string(base + i), fs[i].second);
        s_.constraints.physical.push_back(std::move(fs[i].first));
      }
    } else if (k == "belief") {
      const Token& agent = identifier("agent name");
      const bool dup = std::any_of(s_.constraints.beliefs.begin(), s_.constraints.beliefs.end(),
                                   [&](const BeliefBlock& b) { return b.agent == agent.text; });
      const auto element = "belief " + agent.text;
      auto fs = formula_block();
      if (dup) {
        duplicate(agent, "belief block for agent");
        return;
      }
      mark(element, agent.span);
      BeliefBlock block{agent.text, {}};
      for (std::size_t i = 0; i < fs.size(); ++i) {
        mark(element + "#" + std::to_string(i), fs[i].second);
        block.formulas.push_back(std::move(fs[i].first));
      }
      s_.constraints.beliefs.push_back(std::move(block));
    } else if (k == "on_universalized") {
      const Token& plan = identifier("plan id");
      auto fs = formula_block();
      auto index = std::count_if(s_.effects.begin(), s_.effects.end(),
                                 [&](const UniversalizationEffect& e) { return e.plan_id == plan.text; });
      for (auto& [f, span] : fs) {
        mark("effect " + plan.text + "#" + std::to_string(index++), span);
        s_.effects.push_back({plan.text, std::move(f)});
      }
    } else if (k == "utility") {
      utility();
    } else {
      candidates();
    }
  }

  void name_list(std::vector<std::string>& into, const std::string& what) {
    do {
      const Token& t = identifier(what + " name");
      const bool clash = std::find(s_.agents.begin(), s_.agents.end(), t.text) != s_.agents.end() ||
                         std::find(s_.objects.begin(), s_.objects.end(), t.text) != s_.objects.end();
      if (clash) {
        duplicate(t, "agent or object");
      } else {
        into.push_back(t.text);
      }
    } while (at_punct(",") && (next(), true));
  }

  void predicates() {
    expect_punct("{");
    if (!at_punct("}")) {
      do {
        PredicateDecl d;
        if (at_keyword("action")) {
          next();
          d.is_action = true;
        }
        const Token& name = identifier("predicate name");
        d.name = name.text;
        if (at_punct("/")) {
          next();
          const Token& n = peek();
          std::size_t arity = 0;
          auto [ptr, ec] = std::from_chars(n.text.data(), n.text.data() + n.text.size(), arity);
          if (n.kind != TokKind::Number || ec != std::errc() || ptr != n.text.data() + n.text.size() || arity > 64) {
            fail(n, "invalid arity " + describe(n), "arity between 0 and 64");
          }
          next();
          d.arity = arity;
        }
        if (s_.find_predicate(d.name)) {
          duplicate(name, "predicate");
        } else {
          mark("predicate " + d.name, name.span);
          s_.predicates.push_back(d);
        }
      } while (at_punct(",") && (next(), true));
    }
    expect_punct("}");
  }

  void plan() {
    const Token& id = identifier("plan id");
    ActionPlan p;
    p.id = id.text;
    expect_keyword("agent");
    const Token& agent = identifier("agent name");
    p.agent = agent.text;
    if (!s_.has_agent(p.agent)) {
      result_.diagnostics.push_back(
          {agent.span, Severity::Error, diag::kUnknownReference, "unknown agent '" + p.agent + "'", "declared agent"});
    }
    if (at_keyword("forall")) {
      next();
      do {
        p.free_object_vars.push_back(identifier("object variable").text);
      } while (at_punct(",") && (next(), true));
    }
    expect_punct(":");
    const auto scope_size = scope_.size();
    for (const auto& v : p.free_object_vars) scope_.emplace_back(v, TermKind::ObjectVariable);
    expect_keyword("reasons");
    expect_punct("{");
    if (!at_punct("}")) p.reasons = literal_list();
    expect_punct("}");
    expect_keyword("action");
    expect_punct("{");
    p.action = literal();
    expect_punct("}");
    scope_.resize(scope_size);
    if (s_.find_plan(p.id)) {
      duplicate(id, "plan");
      return;
    }
    mark("plan " + p.id, id.span);
    s_.plans.push_back(std::move(p));
  }

  void utility() {
    const Token& ctx = identifier("context name");
    expect_punct("{");
    UtilityBlock block{ctx.text, {}};
    while (!at_punct("}")) {
      UtilityEntry e;
      e.action = literal();
      expect_punct("=");
      e.value = number();
      expect_punct(";");
      block.entries.push_back(std::move(e));
    }
    expect_punct("}");
    const bool dup = std::any_of(s_.utilities.begin(), s_.utilities.end(),
                                 [&](const UtilityBlock& b) { return b.context == block.context; });
    if (dup) {
      duplicate(ctx, "utility block");
      return;
    }
    mark("utility " + ctx.text, ctx.span);
    s_.utilities.push_back(std::move(block));
  }

  void candidates() {
    const Token& ctx = identifier("context name");
    CandidateSet c;
    c.context = ctx.text;
    expect_keyword("given");
    expect_punct("{");
    if (!at_punct("}")) c.condition = literal_list();
    expect_punct("}");
    expect_punct("{");
    if (!at_punct("}")) c.actions = literal_list();
    expect_punct("}");
    if (s_.find_candidates(c.context)) {
      duplicate(ctx, "candidate context");
      return;
    }
    mark("candidates " + ctx.text, ctx.span);
    s_.candidates.push_back(std::move(c));
  }

  Rational number() {
    const Token& t = peek();
    if (t.kind != TokKind::Number) fail(t, "unexpected " + describe(t), "number");
    std::string_view text = t.text;
    bool negative = false;
    if (!text.empty() && text.front() == '-') {
      negative = true;
      text.remove_prefix(1);
    }
    std::string_view whole = text, frac, den;
    if (auto slash = whole.find('/'); slash != std::string_view::npos) {
      den = whole.substr(slash + 1);
      whole = whole.substr(0, slash);
    }
    if (auto dot = whole.find('.'); dot != std::string_view::npos) {
      frac = whole.substr(dot + 1);
      whole = whole.substr(0, dot);
    }
    if (whole.size() + frac.size() > 18 || den.size() > 18) fail(t, "number " + t.text + " is too large", "", diag::kLimit);
    std::int64_t num = 0, scale = 1, d = 1;
    std::string digits = std::string(whole) + std::string(frac);
    std::from_chars(digits.data(), digits.data() + digits.size(), num);
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    if (!den.empty()) std::from_chars(den.data(), den.data() + den.size(), d);
    if (d == 0) fail(t, "zero denominator in " + t.text);
    if (scale > 1 && d > 1 && d > std::numeric_limits<std::int64_t>::max() / scale) {
      fail(t, "number " + t.text + " is too large", "", diag::kLimit);
    }
    next();
    return Rational(negative ? -num : num, scale * d);
  }

  std::vector<SignedAtom> literal_list() {
    std::vector<SignedAtom> out;
    out.push_back(literal());
    while (at_punct(",")) {
      next();
      out.push_back(literal());
    }
    if (peek().kind == TokKind::Ident && !is_section_keyword(peek())) {
      fail(peek(), "unexpected " + describe(peek()), "',' or '}'");
    }
    return out;
  }

  SignedAtom literal() {
    SignedAtom l;
    if (at_keyword("not")) {
      next();
      l.negated = true;
    }
    l.atom = atom();
    return l;
  }

  Term term() {
    const Token& t = identifier("term");
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->first == t.text) return {it->second, t.text};
    }
    if (s_.has_agent(t.text)) return Term::agent(t.text);
    if (std::find(s_.objects.begin(), s_.objects.end(), t.text) != s_.objects.end()) return Term::object(t.text);
    result_.diagnostics.push_back({t.span, Severity::Error, diag::kUnknownReference,
                                   "unknown term '" + t.text + "'", "declared agent, object or bound variable"});
    return Term::agent(t.text);
  }

  Atom atom() {
    Atom a;
    a.predicate = identifier("atom").text;
    if (at_punct("(")) {
      next();
      a.args.push_back(term());
      while (at_punct(",")) {
        next();
        a.args.push_back(term());
      }
      expect_punct(")");
    }
    return a;
  }

  std::vector<std::pair<Formula, SourceSpan>> formula_block() {
    expect_punct("{");
    std::vector<std::pair<Formula, SourceSpan>> out;
    while (!at_punct("}")) {
      const auto start = pos_;
      auto f = formula();
      out.emplace_back(std::move(f), span_since(start));
      expect_punct(";");
    }
    expect_punct("}");
    return out;
  }

  struct DepthGuard {
    Parser& p;
    explicit DepthGuard(Parser& parser) : p(parser) {
      if (++p.depth_ > p.options_.max_depth) {
        --p.depth_;
        p.fail(p.peek(), "formula nesting deeper than " + std::to_string(p.options_.max_depth), "", diag::kLimit);
      }
    }
    ~DepthGuard() { --p.depth_; }
  };

  Formula formula() {
    DepthGuard guard(*this);
    auto lhs = disjunction();
    if (at_punct("->")) {
      next();
      return Formula::implies(std::move(lhs), formula());
    }
    return lhs;
  }

  Formula disjunction() {
    std::vector<Formula> parts{conjunction()};
    while (at_keyword("or")) {
      next();
      parts.push_back(conjunction());
    }
    return parts.size() == 1 ? std::move(parts.front()) : Formula::disjunction(std::move(parts));
  }

  Formula conjunction() {
    std::vector<Formula> parts{unary()};
    while (at_keyword("and")) {
      next();
      parts.push_back(unary());
    }
    return parts.size() == 1 ? std::move(parts.front()) : Formula::conjunction(std::move(parts));
  }

  Formula unary() {
    DepthGuard guard(*this);
    if (at_keyword("not")) {
      next();
      return Formula::negation(unary());
    }
    return primary();
  }

  Formula primary() {
    if (at_punct("(")) {
      next();
      auto f = formula();
      expect_punct(")");
      return f;
    }
    if (at_keyword("true")) {
      next();
      return Formula::truth();
    }
    if (at_keyword("false")) {
      next();
      return Formula::falsity();
    }
    if (at_keyword("forall")) {
      next();
      auto kind = TermKind::AgentVariable;
      if (at_keyword("object")) {
        next();
        kind = TermKind::ObjectVariable;
      }
      const Token& v = identifier("variable");
      expect_punct(".");
      scope_.emplace_back(v.text, kind);
      auto body = formula();
      scope_.pop_back();
      return Formula::forall(Term{kind, v.text}, std::move(body));
    }
    if (peek().kind != TokKind::Ident || is_reserved(peek().text)) fail(peek(), "unexpected " + describe(peek()), "formula");
    return Formula::atom(atom());
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const ParseOptions& options_;
  ParseResult& result_;
  Scenario s_;
  std::vector<std::pair<std::string, TermKind>> scope_;
  std::size_t depth_ = 0;
};

bool has_error(const std::vector<ParseDiagnostic>& ds) {
  return std::any_of(ds.begin(), ds.end(), [](const ParseDiagnostic& d) { return d.severity == Severity::Error; });
}

std::string join(const std::vector<SignedAtom>& ls) {
  std::string out;
  for (std::size_t i = 0; i < ls.size(); ++i) {
    if (i) out += ", ";
    out += ls[i].str();
  }
  return out;
}

void print_block(std::ostringstream& os, const std::string& head, const std::vector<Formula>& fs) {
  os << head << " {\n";
  for (const auto& f : fs) os << "  " << f.str() << ";\n";
  os << "}\n";
}

}  // namespace

ParseResult parse_scenario(std::string_view text, const ParseOptions& options) {
  ParseResult result;
  if (text.size() > options.max_bytes) {
    result.diagnostics.push_back({{options.file, 1, 1, 0, 0},
                                  Severity::Error,
                                  diag::kLimit,
                                  "input of " + std::to_string(text.size()) + " bytes exceeds the limit of " +
                                      std::to_string(options.max_bytes),
                                  ""});
    return result;
  }
  auto tokens = Lexer(text, options.file, result.diagnostics).run();
  Scenario s = Parser(std::move(tokens), options, result).run();
  if (has_error(result.diagnostics)) return result;

  for (auto& d : validate(s)) {
    SourceSpan span{options.file, 1, 1, 0, 0};
    if (auto it = result.spans.find(d.element); it != result.spans.end()) {
      span = it->second;
    } else if (auto h = result.spans.find("scenario"); h != result.spans.end()) {
      span = h->second;
    }
    result.diagnostics.push_back({span, Severity::Error, d.code, d.message, ""});
  }
  if (!has_error(result.diagnostics)) result.scenario = std::move(s);
  return result;
}

std::string print_scenario(const Scenario& s) {
  std::ostringstream os;
  os << "scenario " << s.name << "\n\n";
  auto names = [](const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i];
    return out;
  };
  if (!s.agents.empty()) os << "agents " << names(s.agents) << '\n';
  if (!s.objects.empty()) os << "objects " << names(s.objects) << '\n';
  if (!s.predicates.empty()) {
    os << "\npredicates {\n";
    for (std::size_t i = 0; i < s.predicates.size(); ++i) {
      const auto& p = s.predicates[i];
      os << "  " << (p.is_action ? "action " : "") << p.name;
      if (p.arity) os << '/' << p.arity;
      os << (i + 1 < s.predicates.size() ? ",\n" : "\n");
    }
    os << "}\n";
  }
  if (!s.plans.empty()) os << '\n';
  for (const auto& p : s.plans) {
    os << "plan " << p.id << " agent " << p.agent;
    if (!p.free_object_vars.empty()) os << " forall " << names(p.free_object_vars);
    os << ": reasons { " << join(p.reasons) << (p.reasons.empty() ? "" : " ") << "} action { " << p.action.str()
       << " }\n";
  }
  if (!s.constraints.physical.empty()) {
    os << '\n';
    print_block(os, "physics", s.constraints.physical);
  }
  for (const auto& b : s.constraints.beliefs) {
    os << '\n';
    print_block(os, "belief " + b.agent, b.formulas);
  }
  for (std::size_t i = 0; i < s.effects.size();) {
    std::vector<Formula> group;
    const auto& plan = s.effects[i].plan_id;
    while (i < s.effects.size() && s.effects[i].plan_id == plan) group.push_back(s.effects[i++].consequence);
    os << '\n';
    print_block(os, "on_universalized " + plan, group);
  }
  for (const auto& c : s.candidates) {
    os << "\ncandidates " << c.context << " given { " << join(c.condition) << (c.condition.empty() ? "" : " ")
       << "} { " << join(c.actions) << (c.actions.empty() ? "" : " ") << "}\n";
  }
  for (const auto& u : s.utilities) {
    os << "\nutility " << u.context << " {\n";
    for (const auto& e : u.entries) os << "  " << e.action.str() << " = " << rational_str(e.value) << ";\n";
    os << "}\n";
  }
  return os.str();
}

}  // namespace deon

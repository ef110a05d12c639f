#include "openerg/descriptor.hpp"

#include <json.hpp>

#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <set>

#include "openerg/stdlib.hpp"

namespace openerg {

namespace {

std::string join_expected(const std::vector<std::string>& e) {
    std::string s;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (i) s += ", ";
        s += e[i];
    }
    return s;
}

// --- lexer -------------------------------------------------------------------

struct Token {
    enum class Kind { Ident, Number, String, Eq, Semi, Bar, LParen, RParen, Comma, End };
    Kind kind = Kind::End;
    std::string text;
    double number = 0.0;
    std::size_t line = 0;
    std::size_t column = 0;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return c >= '0' && c <= '9'; }

std::vector<Token> lex_line(std::string_view s, std::size_t line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        const char c = s[i];
        const std::size_t col = i + 1;
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            continue;
        }
        if (c == '#') break;
        Token t;
        t.line = line;
        t.column = col;
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < s.size() && ident_char(s[j])) ++j;
            t.kind = Token::Kind::Ident;
            t.text = std::string(s.substr(i, j - i));
            i = j;
        } else if (digit(c) || c == '.' ||
                   ((c == '-' || c == '+') && i + 1 < s.size() && (digit(s[i + 1]) || s[i + 1] == '.'))) {
            std::size_t j = i + 1;
            while (j < s.size() && (digit(s[j]) || s[j] == '.' || s[j] == 'e' || s[j] == 'E' ||
                                    ((s[j] == '-' || s[j] == '+') && (s[j - 1] == 'e' || s[j - 1] == 'E'))))
                ++j;
            std::string_view num = s.substr(i, j - i);
            if (num.front() == '+') num.remove_prefix(1);
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
            if (ec != std::errc() || ptr != num.data() + num.size())
                throw ParseError(line, col, "malformed number '" + std::string(s.substr(i, j - i)) + "'");
            t.kind = Token::Kind::Number;
            t.number = v;
            t.text = std::string(s.substr(i, j - i));
            i = j;
        } else if (c == '"') {
            std::size_t j = i + 1;
            std::string value;
            while (j < s.size() && s[j] != '"') {
                if (s[j] == '\\' && j + 1 < s.size()) ++j;
                value += s[j++];
            }
            if (j >= s.size()) throw ParseError(line, col, "unterminated string", {"'\"'"});
            t.kind = Token::Kind::String;
            t.text = std::move(value);
            i = j + 1;
        } else {
            switch (c) {
                case '=': t.kind = Token::Kind::Eq; break;
                case ';': t.kind = Token::Kind::Semi; break;
                case '|': t.kind = Token::Kind::Bar; break;
                case '(': t.kind = Token::Kind::LParen; break;
                case ')': t.kind = Token::Kind::RParen; break;
                case ',': t.kind = Token::Kind::Comma; break;
                default: throw ParseError(line, col, std::string("unexpected character '") + c + "'");
            }
            t.text = std::string(1, c);
            ++i;
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.line = line;
    end.column = s.size() + 1;
    out.push_back(end);
    return out;
}

// --- parser ------------------------------------------------------------------

class LineParser {
  public:
    explicit LineParser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    const Token& peek() const { return toks_[pos_]; }
    bool at(Token::Kind k) const { return peek().kind == k; }
    Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] void fail(std::vector<std::string> expected) const {
        const Token& t = peek();
        const std::string found = t.kind == Token::Kind::End ? "end of line" : "'" + t.text + "'";
        throw ParseError(t.line, t.column, "expected " + join_expected(expected) + ", found " + found,
                         std::move(expected));
    }

    Token expect(Token::Kind k, const std::string& what) {
        if (!at(k)) fail({what});
        return take();
    }

    void expect_end() {
        if (!at(Token::Kind::End)) fail({"end of line"});
    }

    Call call() {
        Call c;
        c.builder = expect(Token::Kind::Ident, "identifier").text;
        if (!at(Token::Kind::LParen)) return c;
        take();
        c.parenthesized = true;
        if (at(Token::Kind::RParen)) {
            take();
            return c;
        }
        for (;;) {
            const Token key = expect(Token::Kind::Ident, "parameter name");
            expect(Token::Kind::Eq, "'='");
            const Token val = expect(Token::Kind::Number, "number");
            if (!c.args.emplace(key.text, val.number).second)
                throw ParseError(key.line, key.column, "duplicate parameter '" + key.text + "'");
            if (at(Token::Kind::Comma)) {
                take();
                continue;
            }
            if (at(Token::Kind::RParen)) {
                take();
                return c;
            }
            fail({"','", "')'"});
        }
    }

    Expr atom() {
        if (at(Token::Kind::LParen)) {
            take();
            Expr e = seq();
            expect(Token::Kind::RParen, "')'");
            return e;
        }
        if (!at(Token::Kind::Ident)) fail({"system name", "'('"});
        Expr e;
        e.atom = call();
        return e;
    }

    Expr par() {
        Expr first = atom();
        if (!at(Token::Kind::Bar)) return first;
        Expr e;
        e.kind = Expr::Kind::Par;
        e.children.push_back(std::move(first));
        while (at(Token::Kind::Bar)) {
            take();
            e.children.push_back(atom());
        }
        return e;
    }

    Expr seq() {
        Expr first = par();
        if (!at(Token::Kind::Semi)) return first;
        Expr e;
        e.kind = Expr::Kind::Seq;
        e.children.push_back(std::move(first));
        while (at(Token::Kind::Semi)) {
            take();
            e.children.push_back(par());
        }
        return e;
    }

    std::vector<double> numbers() {
        std::vector<double> v;
        while (at(Token::Kind::Number)) v.push_back(take().number);
        expect_end();
        return v;
    }

  private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

const std::vector<std::string> kStatementKeywords = {"'system'", "'compose'", "'parameter'", "'initial'",
                                                     "'simulate'"};
const std::vector<std::string> kSimulateKeys = {"'method'", "'dt'", "'steps'", "'output'", "'format'"};

void parse_simulate_entry(LineParser& p, SimulationBlock& sim) {
    const Token key = p.take();
    if (key.kind != Token::Kind::Ident) throw ParseError(key.line, key.column, "expected simulation setting", kSimulateKeys);
    p.expect(Token::Kind::Eq, "'='");
    const Token& v = p.peek();
    try {
        if (key.text == "method") {
            if (!p.at(Token::Kind::Ident)) p.fail({"euler", "rk4", "symplectic"});
            sim.method = parse_method(p.take().text);
        } else if (key.text == "format") {
            if (!p.at(Token::Kind::Ident)) p.fail({"csv", "json"});
            sim.format = parse_format(p.take().text);
        } else if (key.text == "dt") {
            sim.dt = p.expect(Token::Kind::Number, "number").number;
        } else if (key.text == "steps") {
            const double n = p.expect(Token::Kind::Number, "integer").number;
            if (!(n >= 1.0) || std::trunc(n) != n) throw ParseError(v.line, v.column, "steps must be a positive integer");
            sim.steps = static_cast<std::size_t>(n);
        } else if (key.text == "output") {
            sim.output = p.expect(Token::Kind::String, "quoted path").text;
        } else {
            throw ParseError(key.line, key.column, "unknown simulation setting '" + key.text + "'", kSimulateKeys);
        }
    } catch (const ConfigError& e) {
        throw ParseError(v.line, v.column, e.what());
    }
}

// --- serialization -------------------------------------------------------------

std::string number(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, ptr};
}

std::string serialize_call(const Call& c) {
    std::string s = c.builder;
    if (!c.parenthesized) return s;
    s += '(';
    bool first = true;
    for (const auto& [k, v] : c.args) {
        if (!first) s += ", ";
        first = false;
        s += k + "=" + number(v);
    }
    return s + ')';
}

std::string serialize_child(const Expr& child, Expr::Kind parent) {
    const bool wrap = child.kind != Expr::Kind::Atom && (child.kind == Expr::Kind::Seq || child.kind == parent);
    const std::string s = serialize(child);
    return wrap ? "(" + s + ")" : s;
}

std::string quote(const std::string& s) {
    std::string r = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') r += '\\';
        r += c;
    }
    return r + '"';
}

// --- builders ------------------------------------------------------------------

struct ParamSpec {
    std::string name;
    double fallback;
    enum class Range { Any, Positive, PositiveInteger, Sign } range = Range::Any;
};

struct Builder {
    std::vector<ParamSpec> params;
    std::function<OpenSystem(const std::map<std::string, double>&)> make;
};

const std::map<std::string, Builder>& builders() {
    using R = ParamSpec::Range;
    static const std::map<std::string, Builder> table = [] {
        std::map<std::string, Builder> t;
        t["pendulum"] = {{{"m", 1.0, R::Positive}, {"l", 1.0, R::Positive}, {"g", 9.81, R::Positive}},
                         [](const auto& a) { return pendulum({a.at("m"), a.at("l"), a.at("g")}); }};
        t["anchor"] = {{{"x", 0.0}, {"y", 0.0}}, [](const auto& a) { return anchor(a.at("x"), a.at("y")); }};
        t["discard"] = {{}, [](const auto&) { return discard(); }};
        t["identity"] = {{}, [](const auto&) { return identity(pivot_space()); }};
        t["chain"] = {{{"n", 2.0, R::PositiveInteger},
                       {"m", 1.0, R::Positive},
                       {"l", 1.0, R::Positive},
                       {"g", 9.81, R::Positive}},
                      [](const auto& a) {
                          return chain(static_cast<std::size_t>(a.at("n")), {a.at("m"), a.at("l"), a.at("g")});
                      }};
        t["oscillator"] = {{{"m", 1.0, R::Positive}, {"k", 1.0, R::Positive}},
                           [](const auto& a) { return as_open(harmonic_oscillator(a.at("m"), a.at("k")), "oscillator"); }};
        Builder gradient{{{"dim", 2.0, R::PositiveInteger},
                          {"scale", 1.0},
                          {"sign", -1.0, R::Sign},
                          {"metric", 1.0, R::Positive}},
                         [](const auto& a) {
                             const auto n = static_cast<std::size_t>(a.at("dim"));
                             const MetricSign sign = a.at("sign") > 0 ? MetricSign::Ascent : MetricSign::Descent;
                             return as_open(gradient_system(Space::lines(n), quadratic_potential(n, a.at("scale")),
                                                            diagonal_metric(std::vector<double>(n, a.at("metric"))), sign),
                                            "gradient_system");
                         }};
        t["gradient_system"] = gradient;
        t["gradient"] = gradient;
        return t;
    }();
    return table;
}

std::map<std::string, double> resolve_args(const Call& c, const Builder& b) {
    std::map<std::string, double> args;
    for (const auto& spec : b.params) args[spec.name] = spec.fallback;
    for (const auto& [k, v] : c.args) {
        bool known = false;
        for (const auto& spec : b.params) {
            if (spec.name != k) continue;
            known = true;
            using R = ParamSpec::Range;
            const bool ok = spec.range == R::Any ? std::isfinite(v)
                            : spec.range == R::Positive ? v > 0.0 && std::isfinite(v)
                            : spec.range == R::Sign ? (v == 1.0 || v == -1.0)
                                                    : (v >= 1.0 && std::trunc(v) == v && v < 1e6);
            if (!ok) throw TypeCheckError("parameter " + k + "=" + number(v) + " of " + c.builder + " is out of range");
        }
        if (!known) throw TypeCheckError("unknown parameter '" + k + "' for builder " + c.builder);
        args[k] = v;
    }
    return args;
}

std::string describe(const Space& s) {
    if (s == pivot_space()) return "T R^2 " + s.to_string();
    return s.to_string();
}

struct Assembler {
    const Descriptor& d;

    OpenSystem instantiate(const Call& c, const std::string& name) const {
        const auto it = builders().find(c.builder);
        if (it == builders().end()) throw TypeCheckError("unknown system or builder '" + c.builder + "'");
        try {
            return it->second.make(resolve_args(c, it->second)).renamed(name);
        } catch (const InvalidParameter& e) {
            throw TypeCheckError(name + ": " + e.what());
        }
    }

    OpenSystem atom(const Call& c) const {
        if (!c.parenthesized)
            for (const auto& def : d.systems)
                if (def.name == c.builder) return instantiate(def.call, def.name);
        return instantiate(c, c.builder);
    }

    static OpenSystem seq(const OpenSystem& a, const OpenSystem& b) {
        if (a.cod() != b.dom())
            throw TypeCheckError("type error: '" + a.name() + "' outputs " + describe(a.cod()) + " but '" + b.name() +
                                 "' expects " + describe(b.dom()));
        return compose(a, b);
    }

    OpenSystem build(const Expr& e) const {
        if (e.kind == Expr::Kind::Atom) return atom(e.atom);
        OpenSystem acc = build(e.children.front());
        for (std::size_t i = 1; i < e.children.size(); ++i) {
            const OpenSystem next = build(e.children[i]);
            acc = e.kind == Expr::Kind::Seq ? seq(acc, next) : tensor(acc, next);
        }
        return acc;
    }
};

void collect_atoms(const Expr& e, const Assembler& as, std::vector<OpenSystem>& out) {
    if (e.kind == Expr::Kind::Atom) {
        out.push_back(as.atom(e.atom));
        return;
    }
    for (const auto& c : e.children) collect_atoms(c, as, out);
}

/// Labels numbered per state-bearing atom when there is more than one.
std::vector<std::string> composite_labels(const std::vector<OpenSystem>& atoms) {
    std::size_t bearing = 0;
    for (const auto& a : atoms) bearing += a.state().dim() > 0;
    std::vector<std::string> labels;
    std::size_t k = 0;
    for (const auto& a : atoms) {
        if (a.state().dim() == 0) continue;
        ++k;
        for (const auto& l : a.labels()) {
            if (bearing <= 1)
                labels.push_back(l);
            else
                labels.push_back(l + (digit(l.back()) ? "_" : "") + std::to_string(k));
        }
    }
    return labels;
}

}  // namespace

ParseError::ParseError(std::size_t line, std::size_t column, std::string message, std::vector<std::string> expected)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

std::string to_string(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }

OutputFormat parse_format(const std::string& name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    throw ConfigError("unknown output format '" + name + "' (expected csv or json)");
}

Expr parse_expression(std::string_view text) {
    LineParser p(lex_line(text, 1));
    Expr e = p.seq();
    p.expect_end();
    return e;
}

Descriptor parse_text(std::string_view text) {
    Descriptor d;
    std::set<std::string> names;
    std::size_t line = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        ++line;
        LineParser p(lex_line(text.substr(start, end - start), line));
        start = end + 1;
        if (p.at(Token::Kind::End)) continue;
        if (!p.at(Token::Kind::Ident)) p.fail(kStatementKeywords);
        const Token kw = p.take();
        if (kw.text == "system") {
            const Token name = p.expect(Token::Kind::Ident, "system name");
            if (!names.insert(name.text).second)
                throw ParseError(name.line, name.column, "system '" + name.text + "' is already defined");
            p.expect(Token::Kind::Eq, "'='");
            d.systems.push_back({name.text, p.call()});
            p.expect_end();
        } else if (kw.text == "compose") {
            if (d.composition) throw ParseError(kw.line, kw.column, "duplicate compose statement");
            d.composition = p.seq();
            p.expect_end();
        } else if (kw.text == "parameter") {
            d.parameter = p.numbers();
        } else if (kw.text == "initial") {
            if (d.initial) throw ParseError(kw.line, kw.column, "duplicate initial statement");
            d.initial = p.numbers();
        } else if (kw.text == "simulate") {
            while (!p.at(Token::Kind::End)) parse_simulate_entry(p, d.simulate);
        } else {
            throw ParseError(kw.line, kw.column, "unknown statement '" + kw.text + "'", kStatementKeywords);
        }
    }
    return d;
}

Descriptor parse_json(std::string_view text) {
    using nlohmann::json;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        // convert the byte offset into line/column
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(line, col, std::string("invalid JSON: ") + e.what());
    }
    auto bad = [](const std::string& what) { return ParseError(1, 1, "JSON descriptor: " + what); };
    if (!j.is_object()) throw bad("top level must be an object");
    Descriptor d;
    try {
        std::set<std::string> names;
        for (const auto& s : j.value("systems", json::array())) {
            SystemDef def;
            def.name = s.at("name").get<std::string>();
            if (!names.insert(def.name).second) throw bad("system '" + def.name + "' is already defined");
            def.call.builder = s.at("builder").get<std::string>();
            def.call.parenthesized = true;
            const json params = s.value("params", json::object());
            for (const auto& [k, v] : params.items()) def.call.args[k] = v.get<double>();
            d.systems.push_back(std::move(def));
        }
        if (j.contains("compose")) d.composition = parse_expression(j.at("compose").get<std::string>());
        if (j.contains("parameter")) d.parameter = j.at("parameter").get<std::vector<double>>();
        if (j.contains("initial")) d.initial = j.at("initial").get<std::vector<double>>();
        if (j.contains("simulate")) {
            const json& s = j.at("simulate");
            if (s.contains("method")) d.simulate.method = parse_method(s.at("method").get<std::string>());
            if (s.contains("dt")) d.simulate.dt = s.at("dt").get<double>();
            if (s.contains("steps")) d.simulate.steps = s.at("steps").get<std::size_t>();
            if (s.contains("output")) d.simulate.output = s.at("output").get<std::string>();
            if (s.contains("format")) d.simulate.format = parse_format(s.at("format").get<std::string>());
        }
    } catch (const json::exception& e) {
        throw bad(e.what());
    } catch (const ConfigError& e) {
        throw bad(e.what());
    }
    return d;
}

Descriptor parse(std::string_view text) {
    const std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '{') return parse_json(text);
    return parse_text(text);
}

std::string serialize(const Expr& e) {
    if (e.kind == Expr::Kind::Atom) return serialize_call(e.atom);
    const std::string sep = e.kind == Expr::Kind::Seq ? " ; " : " | ";
    std::string s;
    for (std::size_t i = 0; i < e.children.size(); ++i) {
        if (i) s += sep;
        s += serialize_child(e.children[i], e.kind);
    }
    return s;
}

std::string serialize(const Descriptor& d) {
    std::string s;
    for (const auto& def : d.systems) s += "system " + def.name + " = " + serialize_call(def.call) + "\n";
    if (d.composition) s += "compose " + serialize(*d.composition) + "\n";
    if (!d.parameter.empty()) {
        s += "parameter";
        for (double v : d.parameter) s += " " + number(v);
        s += "\n";
    }
    if (d.initial) {
        s += "initial";
        for (double v : *d.initial) s += " " + number(v);
        s += "\n";
    }
    const SimulationBlock& sim = d.simulate;
    std::string block;
    if (sim.method) block += " method=" + to_string(*sim.method);
    if (sim.dt) block += " dt=" + number(*sim.dt);
    if (sim.steps) block += " steps=" + std::to_string(*sim.steps);
    if (sim.output) block += " output=" + quote(*sim.output);
    if (sim.format) block += " format=" + to_string(*sim.format);
    if (!block.empty()) s += "simulate" + block + "\n";
    return s;
}

std::vector<std::string> builder_ids() {
    std::vector<std::string> ids;
    for (const auto& [k, v] : builders()) ids.push_back(k);
    return ids;
}

Assembly assemble(const Descriptor& d) {
    if (!d.composition) throw TypeCheckError("descriptor has no compose statement");
    for (const auto& def : d.systems)
        if (!builders().contains(def.call.builder))
            throw TypeCheckError("system '" + def.name + "' uses unknown builder '" + def.call.builder + "'");
    const Assembler as{d};
    const Expr& top = *d.composition;

    std::vector<OpenSystem> atoms;
    collect_atoms(top, as, atoms);
    const std::vector<std::string> labels = composite_labels(atoms);

    std::vector<OpenSystem> prefixes;
    if (top.kind == Expr::Kind::Seq) {
        OpenSystem acc = as.build(top.children.front());
        prefixes.push_back(acc);
        for (std::size_t i = 1; i < top.children.size(); ++i) {
            acc = Assembler::seq(acc, as.build(top.children[i]));
            prefixes.push_back(acc);
        }
    } else {
        prefixes.push_back(as.build(top));
    }
    OpenSystem system = prefixes.back().relabeled(labels);
    return {std::move(system), std::move(prefixes)};
}

}  // namespace openerg

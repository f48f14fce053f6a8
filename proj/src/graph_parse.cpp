#include <cctype>
#include <optional>
#include <sstream>

#include "error.hpp"
#include "graph.hpp"

namespace causal {

namespace {

struct Token {
    enum class Kind { kIdent, kString, kInt, kPunct, kArrow, kEnd };
    Kind kind = Kind::kEnd;
    std::string text;
    long long int_value = 0;
    int line = 1;
    int column = 1;
};

// Shared lexer for both graph grammars. DOT wants arrows and punctuation;
// GML wants integers and brackets; both use identifiers and quoted strings.
class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    Token next() {
        skip_whitespace();
        Token token;
        token.line = line_;
        token.column = column_;
        if (pos_ >= text_.size()) {
            token.kind = Token::Kind::kEnd;
            token.text = "<end of input>";
            return token;
        }
        char c = text_[pos_];
        if (c == '"') {
            token.kind = Token::Kind::kString;
            token.text = read_quoted();
            return token;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            token.kind = Token::Kind::kIdent;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                token.text += text_[pos_];
                advance();
            }
            return token;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+') {
            bool is_arrow = c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>';
            if (is_arrow) {
                token.kind = Token::Kind::kArrow;
                token.text = "->";
                advance();
                advance();
                return token;
            }
            token.kind = Token::Kind::kInt;
            if (c == '-' || c == '+') {
                token.text += c;
                advance();
            }
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                token.text += text_[pos_];
                advance();
            }
            if (token.text.empty() || token.text == "-" || token.text == "+") {
                fail(token, "malformed number");
            }
            token.int_value = std::stoll(token.text);
            return token;
        }
        token.kind = Token::Kind::kPunct;
        token.text = std::string(1, c);
        advance();
        return token;
    }

    [[noreturn]] void fail(const Token& at, const std::string& expected) const {
        std::ostringstream msg;
        msg << "syntax error at line " << at.line << ", column " << at.column << ": expected "
            << expected << ", got '" << at.text << "'";
        throw Error(ErrorCode::kParse, msg.str());
    }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void skip_whitespace() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            advance();
        }
    }

    std::string read_quoted() {
        advance();  // opening quote
        std::string out;
        while (pos_ < text_.size() && text_[pos_] != '"') {
            char c = text_[pos_];
            if (c == '\\' && pos_ + 1 < text_.size()) {
                advance();
                c = text_[pos_];
            }
            out += c;
            advance();
        }
        if (pos_ >= text_.size()) {
            Token token;
            token.line = line_;
            token.column = column_;
            token.text = "<end of input>";
            fail(token, "closing '\"'");
        }
        advance();  // closing quote
        return out;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

class TokenStream {
public:
    explicit TokenStream(const std::string& text) : lexer_(text) { current_ = lexer_.next(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token token = current_;
        current_ = lexer_.next();
        return token;
    }

    Token expect(Token::Kind kind, const std::string& what) {
        if (current_.kind != kind) lexer_.fail(current_, what);
        return take();
    }

    Token expect_punct(char c) {
        if (current_.kind != Token::Kind::kPunct || current_.text[0] != c) {
            lexer_.fail(current_, std::string("'") + c + "'");
        }
        return take();
    }

    bool at_punct(char c) const {
        return current_.kind == Token::Kind::kPunct && current_.text[0] == c;
    }

    [[noreturn]] void fail(const std::string& expected) const { lexer_.fail(current_, expected); }

private:
    Lexer lexer_;
    Token current_;
};

void warn(std::vector<std::string>* warnings, const std::string& message) {
    if (warnings) warnings->push_back(message);
}

bool parse_bool_value(TokenStream& tokens) {
    const Token& token = tokens.peek();
    if (token.kind == Token::Kind::kIdent || token.kind == Token::Kind::kString) {
        if (token.text == "true") {
            tokens.take();
            return true;
        }
        if (token.text == "false") {
            tokens.take();
            return false;
        }
    }
    tokens.fail("'true' or 'false'");
}

// attrs := '[' key '=' value (',' key '=' value)* ']'
// Returns the observed flag if one was given; unknown keys warn.
std::optional<bool> parse_dot_attrs(TokenStream& tokens, const std::string& subject,
                                    bool is_edge_stmt, std::vector<std::string>* warnings) {
    std::optional<bool> observed;
    tokens.expect_punct('[');
    while (true) {
        Token key = tokens.peek().kind == Token::Kind::kString
                        ? tokens.take()
                        : tokens.expect(Token::Kind::kIdent, "attribute name");
        tokens.expect_punct('=');
        if (key.text == "observed" && !is_edge_stmt) {
            bool value = parse_bool_value(tokens);
            if (observed.has_value() && *observed != value) {
                throw Error(ErrorCode::kParse, "conflicting 'observed' attribute for node '" +
                                                   subject + "'");
            }
            observed = value;
        } else {
            // consume and ignore the value token
            const Token& value = tokens.peek();
            if (value.kind != Token::Kind::kIdent && value.kind != Token::Kind::kString &&
                value.kind != Token::Kind::kInt) {
                tokens.fail("attribute value");
            }
            tokens.take();
            if (is_edge_stmt) {
                warn(warnings, "ignoring attribute '" + key.text + "' on edge statement");
            } else {
                warn(warnings,
                     "ignoring unknown attribute '" + key.text + "' on node '" + subject + "'");
            }
        }
        if (tokens.at_punct(',')) {
            tokens.take();
            continue;
        }
        break;
    }
    tokens.expect_punct(']');
    return observed;
}

std::string parse_dot_id(TokenStream& tokens) {
    const Token& token = tokens.peek();
    if (token.kind == Token::Kind::kIdent || token.kind == Token::Kind::kString) {
        return tokens.take().text;
    }
    tokens.fail("node identifier");
}

bool is_plain_identifier(const std::string& name) {
    if (name.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_') return false;
    for (char c : name) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    }
    return true;
}

std::string quote_identifier(const std::string& name) {
    if (is_plain_identifier(name)) return name;
    std::string out = "\"";
    for (char c : name) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += "\"";
    return out;
}

}  // namespace

CausalGraph parse_dot(const std::string& text, std::vector<std::string>* warnings) {
    TokenStream tokens(text);
    GraphBuilder builder;

    Token head = tokens.expect(Token::Kind::kIdent, "'digraph'");
    if (head.text != "digraph") tokens.fail("'digraph'");
    if (tokens.peek().kind == Token::Kind::kIdent ||
        tokens.peek().kind == Token::Kind::kString) {
        tokens.take();  // optional graph name
    }
    tokens.expect_punct('{');

    while (!tokens.at_punct('}')) {
        std::string first = parse_dot_id(tokens);
        std::vector<std::string> chain{first};
        while (tokens.peek().kind == Token::Kind::kArrow) {
            tokens.take();
            chain.push_back(parse_dot_id(tokens));
        }
        bool is_edge_stmt = chain.size() > 1;
        std::optional<bool> observed;
        if (tokens.at_punct('[')) {
            observed = parse_dot_attrs(tokens, first, is_edge_stmt, warnings);
        }
        tokens.expect_punct(';');

        if (is_edge_stmt) {
            for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
                builder.edge(chain[i], chain[i + 1]);
            }
        } else {
            builder.node(first);
            if (observed.has_value()) builder.node(first, *observed);
        }
    }
    tokens.expect_punct('}');
    if (tokens.peek().kind != Token::Kind::kEnd) tokens.fail("end of input");
    return builder.build();
}

CausalGraph parse_gml(const std::string& text, std::vector<std::string>* warnings) {
    TokenStream tokens(text);

    Token head = tokens.expect(Token::Kind::kIdent, "'graph'");
    if (head.text != "graph") tokens.fail("'graph'");
    tokens.expect_punct('[');
    Token directed = tokens.expect(Token::Kind::kIdent, "'directed'");
    if (directed.text != "directed") tokens.fail("'directed'");
    Token flag = tokens.expect(Token::Kind::kInt, "1");
    if (flag.int_value != 1) {
        throw Error(ErrorCode::kParse, "only directed graphs are supported (need 'directed 1')");
    }

    std::map<long long, std::string> labels;
    std::vector<std::pair<long long, long long>> edges;
    std::map<std::string, bool> observed;

    auto skip_value = [&](const std::string& key) {
        const Token& value = tokens.peek();
        if (value.kind == Token::Kind::kPunct && value.text == "[") {
            // balanced block
            int depth = 0;
            do {
                Token t = tokens.take();
                if (t.kind == Token::Kind::kPunct && t.text == "[") ++depth;
                if (t.kind == Token::Kind::kPunct && t.text == "]") --depth;
                if (t.kind == Token::Kind::kEnd) tokens.fail("']'");
            } while (depth > 0);
        } else {
            tokens.take();
        }
        warn(warnings, "ignoring unknown GML key '" + key + "'");
    };

    while (!tokens.at_punct(']')) {
        Token block = tokens.expect(Token::Kind::kIdent, "'node', 'edge' or ']'");
        if (block.text == "node") {
            tokens.expect_punct('[');
            std::optional<long long> id;
            std::optional<std::string> label;
            std::optional<bool> node_observed;
            while (!tokens.at_punct(']')) {
                Token key = tokens.expect(Token::Kind::kIdent, "node attribute");
                if (key.text == "id") {
                    id = tokens.expect(Token::Kind::kInt, "integer node id").int_value;
                } else if (key.text == "label") {
                    label = tokens.expect(Token::Kind::kString, "quoted label").text;
                } else if (key.text == "observed") {
                    Token value = tokens.expect(Token::Kind::kString, "\"true\" or \"false\"");
                    if (value.text != "true" && value.text != "false") {
                        tokens.fail("\"true\" or \"false\"");
                    }
                    node_observed = value.text == "true";
                } else {
                    skip_value(key.text);
                }
            }
            tokens.expect_punct(']');
            if (!id.has_value()) throw Error(ErrorCode::kParse, "GML node is missing 'id'");
            if (!label.has_value()) throw Error(ErrorCode::kParse, "GML node is missing 'label'");
            if (labels.count(*id)) {
                throw Error(ErrorCode::kParse,
                            "duplicate GML node id " + std::to_string(*id));
            }
            for (const auto& [existing_id, existing_label] : labels) {
                if (existing_label == *label) {
                    throw Error(ErrorCode::kParse, "duplicate GML node label '" + *label + "'");
                }
            }
            labels[*id] = *label;
            observed[*label] = node_observed.value_or(true);
        } else if (block.text == "edge") {
            tokens.expect_punct('[');
            std::optional<long long> source, target;
            while (!tokens.at_punct(']')) {
                Token key = tokens.expect(Token::Kind::kIdent, "edge attribute");
                if (key.text == "source") {
                    source = tokens.expect(Token::Kind::kInt, "integer source id").int_value;
                } else if (key.text == "target") {
                    target = tokens.expect(Token::Kind::kInt, "integer target id").int_value;
                } else {
                    skip_value(key.text);
                }
            }
            tokens.expect_punct(']');
            if (!source.has_value() || !target.has_value()) {
                throw Error(ErrorCode::kParse, "GML edge needs 'source' and 'target'");
            }
            edges.emplace_back(*source, *target);
        } else {
            tokens.fail("'node', 'edge' or ']'");
        }
    }
    tokens.expect_punct(']');
    if (tokens.peek().kind != Token::Kind::kEnd) tokens.fail("end of input");

    GraphBuilder builder;
    for (const auto& [id, label] : labels) builder.node(label, observed[label]);
    for (const auto& [source, target] : edges) {
        auto src = labels.find(source);
        auto dst = labels.find(target);
        if (src == labels.end()) {
            throw Error(ErrorCode::kParse,
                        "edge references unknown node id " + std::to_string(source));
        }
        if (dst == labels.end()) {
            throw Error(ErrorCode::kParse,
                        "edge references unknown node id " + std::to_string(target));
        }
        builder.edge(src->second, dst->second);
    }
    return builder.build();
}

std::string render_dot(const CausalGraph& g) {
    std::ostringstream out;
    out << "digraph {\n";
    for (const auto& name : g.nodes()) {
        out << "  " << quote_identifier(name);
        if (!g.is_observed(name)) out << " [observed=false]";
        out << ";\n";
    }
    for (const auto& [from, to] : g.edges()) {
        out << "  " << quote_identifier(from) << " -> " << quote_identifier(to) << ";\n";
    }
    out << "}\n";
    return out.str();
}

std::string render_gml(const CausalGraph& g) {
    std::ostringstream out;
    out << "graph [\n  directed 1\n";
    std::map<std::string, std::size_t> ids;
    std::size_t next_id = 0;
    for (const auto& name : g.nodes()) ids[name] = next_id++;
    for (const auto& name : g.nodes()) {
        out << "  node [ id " << ids[name] << " label \"" << name << "\"";
        if (!g.is_observed(name)) out << " observed \"false\"";
        out << " ]\n";
    }
    for (const auto& [from, to] : g.edges()) {
        out << "  edge [ source " << ids[from] << " target " << ids[to] << " ]\n";
    }
    out << "]\n";
    return out.str();
}

}  // namespace causal

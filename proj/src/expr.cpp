#include "maxstop/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "maxstop/error.hpp"

namespace maxstop {
namespace {

struct Node {
    enum class Op { constant, var, add, sub, mul, div, neg, exp, log, abs, sqrt, pow } op;
    double value = 0.0;
    std::vector<std::shared_ptr<const Node>> args;

    double eval(double x) const {
        switch (op) {
            case Op::constant: return value;
            case Op::var: return x;
            case Op::add: return args[0]->eval(x) + args[1]->eval(x);
            case Op::sub: return args[0]->eval(x) - args[1]->eval(x);
            case Op::mul: return args[0]->eval(x) * args[1]->eval(x);
            case Op::div: return args[0]->eval(x) / args[1]->eval(x);
            case Op::neg: return -args[0]->eval(x);
            case Op::exp: return std::exp(args[0]->eval(x));
            case Op::log: return std::log(args[0]->eval(x));
            case Op::abs: return std::abs(args[0]->eval(x));
            case Op::sqrt: return std::sqrt(args[0]->eval(x));
            case Op::pow: return std::pow(args[0]->eval(x), args[1]->eval(x));
        }
        return std::nan("");
    }
};

using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Op op, std::vector<NodePtr> args = {}, double value = 0.0) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->value = value;
    n->args = std::move(args);
    return n;
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr parse() {
        NodePtr n = expr();
        skip();
        if (pos_ != text_.size()) error("unexpected character");
        return n;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void error(const std::string& msg) const {
        fail(ErrorKind::parse, "expression '" + std::string(text_) + "': " + msg + " at position " +
                                   std::to_string(pos_));
    }

    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) error(std::string("expected '") + c + "'");
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) lhs = make(Node::Op::add, {lhs, term()});
            else if (accept('-')) lhs = make(Node::Op::sub, {lhs, term()});
            else return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) lhs = make(Node::Op::mul, {lhs, unary()});
            else if (accept('/')) lhs = make(Node::Op::div, {lhs, unary()});
            else return lhs;
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Node::Op::neg, {unary()});
        if (accept('+')) return unary();
        return primary();
    }

    NodePtr primary() {
        skip();
        if (pos_ >= text_.size()) error("unexpected end of input");
        char c = text_[pos_];
        if (accept('(')) {
            NodePtr n = expr();
            expect(')');
            return n;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            std::string_view name = text_.substr(start, pos_ - start);
            if (name == "x") return make(Node::Op::var);
            if (name == "pi") return make(Node::Op::constant, {}, std::numbers::pi);
            Node::Op op;
            int arity = 1;
            if (name == "exp") op = Node::Op::exp;
            else if (name == "log") op = Node::Op::log;
            else if (name == "abs") op = Node::Op::abs;
            else if (name == "sqrt") op = Node::Op::sqrt;
            else if (name == "pow") { op = Node::Op::pow; arity = 2; }
            else {
                pos_ = start;
                error("unknown identifier '" + std::string(name) + "'");
            }
            expect('(');
            std::vector<NodePtr> args{expr()};
            for (int i = 1; i < arity; ++i) {
                expect(',');
                args.push_back(expr());
            }
            expect(')');
            return make(op, std::move(args));
        }
        error("unexpected character");
    }

    NodePtr number() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) ++pos_;
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t save = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            } else {
                pos_ = save;
            }
        }
        std::string token(text_.substr(start, pos_ - start));
        try {
            std::size_t used = 0;
            double v = std::stod(token, &used);
            if (used != token.size()) throw std::invalid_argument(token);
            return make(Node::Op::constant, {}, v);
        } catch (const std::exception&) {
            pos_ = start;
            error("malformed number '" + token + "'");
        }
    }
};

}  // namespace

RealFn compile_expression(std::string_view text) {
    NodePtr root = Parser(text).parse();
    return [root](double x) { return root->eval(x); };
}

}  // namespace maxstop

#include "flatnormal/expression.hpp"

#include "flatnormal/error.hpp"

#include <fmt/format.h>

#include <cctype>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

namespace flatnormal {

enum class Op { number, parameter, negate, add, subtract, multiply, divide, power, call };

enum class Function {
    sin, cos, tan, sec, csc, cot, asin, acos, atan,
    sinh, cosh, tanh, sech, csch, coth, asinh, acosh, atanh,
    exp, log, sqrt,
};

struct Expression::Node {
    Op op = Op::number;
    double value = 0.0;
    int index = 0;
    Function function = Function::sin;
    std::shared_ptr<const Node> left;
    std::shared_ptr<const Node> right;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

const std::map<std::string, Function>& functions() {
    static const std::map<std::string, Function> table{
        {"sin", Function::sin},     {"cos", Function::cos},     {"tan", Function::tan},
        {"sec", Function::sec},     {"csc", Function::csc},     {"cot", Function::cot},
        {"asin", Function::asin},   {"acos", Function::acos},   {"atan", Function::atan},
        {"sinh", Function::sinh},   {"cosh", Function::cosh},   {"tanh", Function::tanh},
        {"sech", Function::sech},   {"csch", Function::csch},   {"coth", Function::coth},
        {"asinh", Function::asinh}, {"acosh", Function::acosh}, {"atanh", Function::atanh},
        {"exp", Function::exp},     {"log", Function::log},     {"sqrt", Function::sqrt},
    };
    return table;
}

NodePtr make(Op op, NodePtr left = nullptr, NodePtr right = nullptr) {
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->left = std::move(left);
    n->right = std::move(right);
    return n;
}

NodePtr number(double v) {
    auto n = std::make_shared<Expression::Node>();
    n->value = v;
    return n;
}

class Parser {
public:
    Parser(const std::string& text, int parameters, const std::map<std::string, double>& constants)
        : text_(text), parameters_(parameters), constants_(constants) {}

    NodePtr parse() {
        NodePtr e = expression();
        skip_space();
        if (pos_ != text_.size()) fail(fmt::format("unexpected '{}'", text_[pos_]));
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw Error(ErrorKind::parse, fmt::format("expression '{}': {} at column {}", text_, what, pos_ + 1));
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expression() {
        NodePtr left = term();
        while (true) {
            if (accept('+')) left = make(Op::add, left, term());
            else if (accept('-')) left = make(Op::subtract, left, term());
            else return left;
        }
    }

    NodePtr term() {
        NodePtr left = unary();
        while (true) {
            if (accept('*')) left = make(Op::multiply, left, unary());
            else if (accept('/')) left = make(Op::divide, left, unary());
            else return left;
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Op::negate, unary());
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) return make(Op::power, base, unary());
        return base;
    }

    NodePtr primary() {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        const char c = text_[pos_];
        if (accept('(')) {
            NodePtr inner = expression();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return literal();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail(fmt::format("unexpected '{}'", c));
    }

    NodePtr literal() {
        const char* begin = text_.c_str() + pos_;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail("malformed number");
        pos_ += static_cast<std::size_t>(end - begin);
        return number(v);
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        const std::string name = text_.substr(start, pos_ - start);
        if (const auto f = functions().find(name); f != functions().end()) {
            if (!accept('(')) fail(fmt::format("expected '(' after {}", name));
            auto n = std::make_shared<Expression::Node>();
            n->op = Op::call;
            n->function = f->second;
            n->left = expression();
            if (!accept(')')) fail("expected ')'");
            return n;
        }
        if (name.size() > 1 && name[0] == 'u' &&
            name.find_first_not_of("0123456789", 1) == std::string::npos) {
            const int k = std::stoi(name.substr(1));
            if (k < 1 || k > parameters_) fail(fmt::format("parameter {} out of range u1..u{}", name, parameters_));
            auto n = std::make_shared<Expression::Node>();
            n->op = Op::parameter;
            n->index = k - 1;
            return n;
        }
        if (const auto c = constants_.find(name); c != constants_.end()) return number(c->second);
        if (name == "pi") return number(std::numbers::pi);
        if (name == "e") return number(std::numbers::e);
        pos_ = start;
        fail(fmt::format("unknown name '{}'", name));
    }

    const std::string& text_;
    int parameters_;
    const std::map<std::string, double>& constants_;
    std::size_t pos_ = 0;
};

template <class T>
T apply(Function f, const T& x) {
    using std::sin, std::cos, std::tan, std::asin, std::acos, std::atan, std::sinh, std::cosh, std::tanh,
        std::asinh, std::acosh, std::atanh, std::exp, std::log, std::sqrt;
    switch (f) {
        case Function::sin: return sin(x);
        case Function::cos: return cos(x);
        case Function::tan: return tan(x);
        case Function::sec: return sec(x);
        case Function::csc: return csc(x);
        case Function::cot: return cot(x);
        case Function::asin: return asin(x);
        case Function::acos: return acos(x);
        case Function::atan: return atan(x);
        case Function::sinh: return sinh(x);
        case Function::cosh: return cosh(x);
        case Function::tanh: return tanh(x);
        case Function::sech: return sech(x);
        case Function::csch: return csch(x);
        case Function::coth: return coth(x);
        case Function::asinh: return asinh(x);
        case Function::acosh: return acosh(x);
        case Function::atanh: return atanh(x);
        case Function::exp: return exp(x);
        case Function::log: return log(x);
        case Function::sqrt: return sqrt(x);
    }
    return x;
}

template <class T>
T evaluate(const Expression::Node& n, const std::vector<T>& u) {
    using std::pow;
    switch (n.op) {
        case Op::number: return T(n.value);
        case Op::parameter: return u[static_cast<std::size_t>(n.index)];
        case Op::negate: return -evaluate(*n.left, u);
        case Op::add: return evaluate(*n.left, u) + evaluate(*n.right, u);
        case Op::subtract: return evaluate(*n.left, u) - evaluate(*n.right, u);
        case Op::multiply: return evaluate(*n.left, u) * evaluate(*n.right, u);
        case Op::divide: return evaluate(*n.left, u) / evaluate(*n.right, u);
        case Op::power:
            if (n.right->op == Op::number) return pow(evaluate(*n.left, u), n.right->value);
            return pow(evaluate(*n.left, u), evaluate(*n.right, u));
        case Op::call: return apply(n.function, evaluate(*n.left, u));
    }
    return T(0.0);
}

bool constant(const Expression::Node& n) {
    if (n.op == Op::parameter) return false;
    return (!n.left || constant(*n.left)) && (!n.right || constant(*n.right));
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

Expression Expression::parse(const std::string& text, int parameters, const std::map<std::string, double>& constants) {
    Expression e;
    e.root_ = Parser(text, parameters, constants).parse();
    return e;
}

double Expression::operator()(const std::vector<double>& u) const { return evaluate(*root_, u); }

HyperDual Expression::operator()(const std::vector<HyperDual>& u) const { return evaluate(*root_, u); }

bool Expression::is_constant() const { return constant(*root_); }

ImmersionChart parse_chart_file(const std::string& text, const std::string& name) {
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    std::optional<int> dimension;
    std::optional<AmbientModel> ambient;
    std::optional<double> curvature;
    std::map<std::string, double> constants;
    std::map<int, std::pair<std::string, int>> domain_text;
    std::map<int, std::pair<std::string, int>> component_text;

    auto fail = [&](int line, const std::string& what) -> Error {
        return Error(ErrorKind::parse, fmt::format("chart file line {}: {}", line, what));
    };
    auto constant_value = [&](const std::string& expr, int line) {
        try {
            const Expression e = Expression::parse(expr, 0, constants);
            return e(std::vector<double>{});
        } catch (const Error& err) {
            throw fail(line, err.what());
        }
    };

    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw.substr(0, raw.find('#'));
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw fail(line_no, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty()) throw fail(line_no, fmt::format("missing value for '{}'", key));
        if (key == "dimension") {
            const double d = constant_value(value, line_no);
            if (d < 1 || d != std::floor(d)) throw fail(line_no, "dimension must be a positive integer");
            dimension = static_cast<int>(d);
        } else if (key == "ambient") {
            std::istringstream parts(value);
            std::string kind;
            int m = 0;
            double c = 0.0;
            parts >> kind >> m;
            if (!parts || m < 1) throw fail(line_no, "ambient expects '<kind> <dimension> [curvature]'");
            if (kind == "euclidean") {
                ambient = AmbientModel::euclidean(m);
            } else if (kind == "sphere" || kind == "hyperbolic") {
                if (!(parts >> c)) throw fail(line_no, fmt::format("{} ambient needs a curvature", kind));
                ambient = kind == "sphere" ? AmbientModel::sphere(m, c) : AmbientModel::hyperbolic(m, c);
            } else {
                throw fail(line_no, fmt::format("unknown ambient kind '{}'", kind));
            }
            std::string extra;
            if (parts >> extra) throw fail(line_no, fmt::format("unexpected '{}'", extra));
            try {
                ambient->validate();
            } catch (const Error& err) {
                throw fail(line_no, err.what());
            }
        } else if (key == "curvature") {
            curvature = constant_value(value, line_no);
        } else if (key.rfind("const ", 0) == 0) {
            const std::string cname = trim(key.substr(6));
            if (cname.empty() || !(std::isalpha(static_cast<unsigned char>(cname[0])) || cname[0] == '_'))
                throw fail(line_no, "malformed constant name");
            constants[cname] = constant_value(value, line_no);
        } else if (key.rfind("domain ", 0) == 0) {
            const std::string axis = trim(key.substr(7));
            if (axis.size() < 2 || axis[0] != 'u') throw fail(line_no, "domain expects 'domain uK = lo, hi'");
            const int k = std::atoi(axis.c_str() + 1);
            if (k < 1) throw fail(line_no, fmt::format("bad axis '{}'", axis));
            domain_text[k] = {value, line_no};
        } else if (key.size() > 1 && key[0] == 'x' && key.find_first_not_of("0123456789", 1) == std::string::npos) {
            component_text[std::stoi(key.substr(1))] = {value, line_no};
        } else {
            throw fail(line_no, fmt::format("unknown key '{}'", key));
        }
    }

    if (!dimension) throw fail(line_no, "missing 'dimension'");
    if (!ambient) throw fail(line_no, "missing 'ambient'");
    const int n = *dimension;
    const int N = ambient->container_dimension();

    ImmersionChart chart;
    chart.name = name;
    chart.n = n;
    chart.ambient = *ambient;
    chart.intrinsic_curvature = curvature;
    for (int k = 1; k <= n; ++k) {
        const auto it = domain_text.find(k);
        if (it == domain_text.end()) throw fail(line_no, fmt::format("missing 'domain u{}'", k));
        const auto& [value, line] = it->second;
        const auto comma = value.find(',');
        if (comma == std::string::npos) throw fail(line, "domain expects 'lo, hi'");
        const double lo = constant_value(trim(value.substr(0, comma)), line);
        const double hi = constant_value(trim(value.substr(comma + 1)), line);
        if (!(lo < hi)) throw fail(line, "domain needs lo < hi");
        chart.domain.push_back({lo, hi});
    }
    if (domain_text.size() != static_cast<std::size_t>(n) || domain_text.rbegin()->first != n)
        throw fail(line_no, fmt::format("domain given for axes beyond u{}", n));

    std::vector<Expression> components;
    for (int k = 1; k <= N; ++k) {
        const auto it = component_text.find(k);
        if (it == component_text.end()) throw fail(line_no, fmt::format("missing component 'x{}'", k));
        try {
            components.push_back(Expression::parse(it->second.first, n, constants));
        } catch (const Error& err) {
            throw fail(it->second.second, err.what());
        }
    }
    if (component_text.rbegin()->first != N)
        throw fail(line_no, fmt::format("component beyond x{} for a {}-dimensional container", N, N));

    chart.map = ChartMap::closed_form([components](const auto& u) {
        using T = typename std::decay_t<decltype(u)>::value_type;
        std::vector<T> x;
        x.reserve(components.size());
        for (const auto& c : components) x.push_back(c(u));
        return x;
    });
    chart.validate();
    return chart;
}

}  // namespace flatnormal

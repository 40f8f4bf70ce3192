#include "hardcomplete/io.hpp"

#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace hardcomplete::io {

using ordered_json = nlohmann::ordered_json;

namespace {

[[noreturn]] void parse_fail(const std::string& what, int line = -1) {
    if (line >= 0)
        throw std::runtime_error(what + " (line " + std::to_string(line) + ")");
    throw std::runtime_error(what);
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

ordered_json parse_json(std::istream& is, const char* what) {
    ordered_json j;
    try {
        is >> j;
    } catch (const std::exception& e) {
        parse_fail(std::string(what) + ": invalid JSON: " + e.what());
    }
    return j;
}

} // namespace

void write_pmx(std::ostream& os, const PartialMatrix& pm, const std::string& header) {
    if (!header.empty()) os << "# " << header << "\n";
    os << "pmx " << pm.dim() << " " << fmt(pm.coeff_bound()) << " " << pm.omega_size() << "\n";
    for (const auto& [key, value] : pm.canonical_entries())
        os << key.first + 1 << " " << key.second + 1 << " " << fmt(value) << "\n";
}

PartialMatrix read_pmx(std::istream& is) {
    std::string line;
    int lineno = 0;
    int n = 0;
    double c = 0.0;
    std::size_t omega = 0;
    bool have_header = false;
    std::optional<PartialMatrix> pm;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        if (!have_header) {
            std::string tag;
            if (!(ls >> tag >> n >> c >> omega) || tag != "pmx")
                parse_fail("read_pmx: bad header, expected `pmx n c |omega|`", lineno);
            pm.emplace(n, c);
            have_header = true;
            continue;
        }
        int i = 0, j = 0;
        double v = 0.0;
        if (!(ls >> i >> j >> v)) parse_fail("read_pmx: malformed entry", lineno);
        if (i < 1 || j < 1 || i > n || j > n) parse_fail("read_pmx: index out of range", lineno);
        pm->reveal(i - 1, j - 1, v);
    }
    if (!have_header) parse_fail("read_pmx: missing header");
    if (pm->omega_size() != omega)
        parse_fail("read_pmx: header claims |omega| = " + std::to_string(omega) +
                   " but entries give " + std::to_string(pm->omega_size()));
    return *std::move(pm);
}

void write_dmx(std::ostream& os, const DenseMatrix& m) {
    os << "dmx " << m.rows() << " " << m.cols() << "\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            os << (j ? " " : "") << fmt(m(i, j));
        os << "\n";
    }
}

DenseMatrix read_dmx(std::istream& is) {
    std::string tag;
    Eigen::Index rows = 0, cols = 0;
    if (!(is >> tag >> rows >> cols) || tag != "dmx" || rows < 0 || cols < 0)
        parse_fail("read_dmx: bad header, expected `dmx rows cols`", 1);
    DenseMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
            if (!(is >> m(i, j))) parse_fail("read_dmx: not enough values");
    if (!m.allFinite()) parse_fail("read_dmx: non-finite entries");
    return m;
}

void write_fac(std::ostream& os, const Factorization& fact) {
    if (fact.u.rows() != fact.v.rows())
        throw std::invalid_argument("write_fac: format holds square factorizations only");
    os << "fac " << fact.u.rows() << " " << fact.rank() << "\n";
    for (const Eigen::MatrixXd* part : {&fact.u, &fact.v})
        for (Eigen::Index i = 0; i < part->rows(); ++i) {
            for (Eigen::Index j = 0; j < part->cols(); ++j)
                os << (j ? " " : "") << fmt((*part)(i, j));
            os << "\n";
        }
}

Factorization read_fac(std::istream& is) {
    std::string tag;
    Eigen::Index n = 0, r = 0;
    if (!(is >> tag >> n >> r) || tag != "fac" || n < 1 || r < 1)
        parse_fail("read_fac: bad header, expected `fac n r`", 1);
    Factorization fact{Eigen::MatrixXd(n, r), Eigen::MatrixXd(n, r)};
    for (Eigen::MatrixXd* part : {&fact.u, &fact.v})
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < r; ++j)
                if (!(is >> (*part)(i, j))) parse_fail("read_fac: not enough values");
    return fact;
}

void write_dimacs(std::ostream& os, const Graph& g) {
    os << "p edge " << g.vertex_count() << " " << g.edge_count() << "\n";
    for (const auto& [i, j] : g.edges()) os << "e " << i + 1 << " " << j + 1 << "\n";
}

Graph read_dimacs(std::istream& is) {
    std::string line;
    int n = -1;
    std::vector<std::pair<int, int>> edges;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind) || kind == "c") continue;
        if (kind == "p") {
            std::string fmt_name;
            int m = 0;
            if (!(ls >> fmt_name >> n >> m) || fmt_name != "edge")
                parse_fail("read_dimacs: bad problem line, expected `p edge n m`", lineno);
        } else if (kind == "e") {
            int i = 0, j = 0;
            if (!(ls >> i >> j)) parse_fail("read_dimacs: bad edge line", lineno);
            if (n < 0) parse_fail("read_dimacs: edge before problem line", lineno);
            if (i < 1 || j < 1 || i > n || j > n)
                parse_fail("read_dimacs: edge endpoint out of range", lineno);
            edges.emplace_back(i - 1, j - 1);
        } else {
            parse_fail("read_dimacs: unknown line kind '" + kind + "'", lineno);
        }
    }
    if (n < 0) parse_fail("read_dimacs: missing problem line");
    return Graph(n, std::move(edges));
}

void write_coloring(std::ostream& os, const Coloring& f) {
    ordered_json j;
    j["k"] = f.k;
    j["colors"] = ordered_json::array();
    for (int c : f.assignment) j["colors"].push_back(c + 1);
    os << j.dump(2) << "\n";
}

Coloring read_coloring(std::istream& is) {
    ordered_json j = parse_json(is, "read_coloring");
    if (!j.contains("k") || !j.contains("colors"))
        parse_fail("read_coloring: need fields `k` and `colors`");
    Coloring f;
    f.k = j["k"].get<int>();
    for (const auto& c : j["colors"]) f.assignment.push_back(c.get<int>() - 1);
    return f;
}

void write_partition_instance(std::ostream& os, const PartitionInstance& inst) {
    ordered_json j = ordered_json::array();
    for (const auto& w : inst.weights()) j.push_back(w.str());
    os << j.dump(2) << "\n";
}

PartitionInstance read_partition_instance(std::istream& is) {
    ordered_json j = parse_json(is, "read_partition_instance");
    if (!j.is_array()) parse_fail("read_partition_instance: expected a JSON array of weights");
    std::vector<Rational> weights;
    for (const auto& w : j) {
        if (w.is_string())
            weights.push_back(Rational::parse(w.get<std::string>()));
        else if (w.is_number_integer())
            weights.push_back(Rational(w.get<std::int64_t>()));
        else if (w.is_number())
            weights.push_back(Rational::from_double_exact(w.get<double>()));
        else
            parse_fail("read_partition_instance: weight must be a number or 'p/q' string");
    }
    return PartitionInstance(std::move(weights));
}

void write_eoks(std::ostream& os, const OneInKSatInstance& inst) {
    os << "p eoks " << inst.k() << " " << inst.var_count() << " " << inst.clause_count() << "\n";
    for (const auto& clause : inst.clauses()) {
        for (std::size_t g = 0; g < clause.size(); ++g)
            os << (g ? " " : "") << clause[g].sign * (clause[g].var + 1);
        os << "\n";
    }
}

OneInKSatInstance read_eoks(std::istream& is) {
    std::string line;
    int lineno = 0;
    int k = 0, n = 0, m = 0;
    bool have_header = false;
    std::vector<std::vector<Literal>> clauses;
    while (std::getline(is, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first) || first == "c") continue;
        if (first == "p") {
            std::string fmt_name;
            if (!(ls >> fmt_name >> k >> n >> m) || fmt_name != "eoks")
                parse_fail("read_eoks: bad problem line, expected `p eoks k n m`", lineno);
            have_header = true;
            continue;
        }
        if (!have_header) parse_fail("read_eoks: clause before problem line", lineno);
        std::vector<Literal> clause;
        std::istringstream again(line);
        int lit = 0;
        while (again >> lit) {
            if (lit == 0) parse_fail("read_eoks: zero literal", lineno);
            clause.push_back({std::abs(lit) - 1, lit > 0 ? 1 : -1});
        }
        if (!again.eof()) parse_fail("read_eoks: malformed literal", lineno);
        clauses.push_back(std::move(clause));
    }
    if (!have_header) parse_fail("read_eoks: missing problem line");
    if (static_cast<int>(clauses.size()) != m)
        parse_fail("read_eoks: header claims " + std::to_string(m) + " clauses, found " +
                   std::to_string(clauses.size()));
    return OneInKSatInstance(k, n, std::move(clauses));
}

namespace {

ordered_json meta_to_json(const SystemMeta& meta) {
    ordered_json j;
    if (const auto* p = std::get_if<PartitionMeta>(&meta)) {
        j["kind"] = "partition";
        ordered_json params;
        params["n"] = p->n;
        params["weights"] = p->weights;
        ordered_json exact = ordered_json::array();
        for (const auto& w : p->weights_exact) exact.push_back(w.str());
        params["weights_exact"] = std::move(exact);
        params["scale"] = p->scale.str();
        j["params"] = std::move(params);
    } else if (const auto* c = std::get_if<CspMeta>(&meta)) {
        j["kind"] = "eoks";
        ordered_json params;
        params["k"] = c->k;
        params["n_vars"] = c->n_vars;
        params["m"] = c->clauses.size();
        ordered_json cl = ordered_json::array();
        for (const auto& clause : c->clauses) {
            ordered_json one = ordered_json::array();
            for (const auto& lit : clause) one.push_back({lit.var + 1, lit.sign});
            cl.push_back(std::move(one));
        }
        params["clauses"] = std::move(cl);
        j["params"] = std::move(params);
    } else if (const auto* a = std::get_if<AmplifiedMeta>(&meta)) {
        j["kind"] = "amplified";
        j["params"] = {{"copies", a->copies}, {"inner_kind", a->inner_kind}};
    } else {
        j["kind"] = "custom";
        j["params"] = ordered_json::object();
    }
    return j;
}

SystemMeta meta_from_json(const ordered_json& j) {
    const std::string kind = j.value("kind", "custom");
    if (kind == "partition") {
        PartitionMeta meta;
        const auto& params = j.at("params");
        meta.n = params.at("n").get<int>();
        meta.weights = params.at("weights").get<std::vector<double>>();
        for (const auto& w : params.at("weights_exact"))
            meta.weights_exact.push_back(Rational::parse(w.get<std::string>()));
        meta.scale = Rational::parse(params.at("scale").get<std::string>());
        return meta;
    }
    if (kind == "eoks") {
        CspMeta meta;
        const auto& params = j.at("params");
        meta.k = params.at("k").get<int>();
        meta.n_vars = params.at("n_vars").get<int>();
        for (const auto& clause : params.at("clauses")) {
            std::vector<Literal> one;
            for (const auto& lit : clause)
                one.push_back({lit.at(0).get<int>() - 1, lit.at(1).get<int>()});
            meta.clauses.push_back(std::move(one));
        }
        return meta;
    }
    if (kind == "amplified") {
        AmplifiedMeta meta;
        meta.copies = j.at("params").at("copies").get<int>();
        meta.inner_kind = j.at("params").at("inner_kind").get<std::string>();
        return meta;
    }
    return std::monostate{};
}

} // namespace

void write_gram_system(std::ostream& os, const GramConstraintSystem& sys,
                       const std::string& provenance) {
    ordered_json j = meta_to_json(sys.meta);
    if (!provenance.empty()) j["provenance"] = provenance;
    j["labels"] = sys.labels();
    ordered_json constraints = ordered_json::array();
    for (const auto& cst : sys.constraints())
        constraints.push_back({cst.a, cst.b, cst.target});
    j["constraints"] = std::move(constraints);
    os << j.dump(2) << "\n";
}

GramConstraintSystem read_gram_system(std::istream& is) {
    ordered_json j = parse_json(is, "read_gram_system");
    GramConstraintSystem sys;
    if (!j.contains("labels") || !j.contains("constraints"))
        parse_fail("read_gram_system: need fields `labels` and `constraints`");
    for (const auto& l : j["labels"]) sys.add_label(l.get<std::string>());
    for (const auto& cst : j["constraints"]) {
        if (!cst.is_array() || cst.size() != 3)
            parse_fail("read_gram_system: constraints must be [label_a, label_b, target] triples");
        sys.add_constraint(cst[0].get<std::string>(), cst[1].get<std::string>(),
                           cst[2].get<double>());
    }
    sys.meta = meta_from_json(j);
    return sys;
}

void write_vector_assignment(std::ostream& os, const VectorAssignment& va) {
    ordered_json j;
    j["dim"] = va.dim();
    ordered_json vecs = ordered_json::object();
    for (const auto& [label, vec] : va.vectors()) {
        ordered_json arr = ordered_json::array();
        for (Eigen::Index i = 0; i < vec.size(); ++i) arr.push_back(vec(i));
        vecs[label] = std::move(arr);
    }
    j["vectors"] = std::move(vecs);
    os << j.dump(2) << "\n";
}

VectorAssignment read_vector_assignment(std::istream& is) {
    ordered_json j = parse_json(is, "read_vector_assignment");
    if (!j.contains("dim") || !j.contains("vectors"))
        parse_fail("read_vector_assignment: need fields `dim` and `vectors`");
    VectorAssignment va(j["dim"].get<int>());
    for (const auto& [label, arr] : j["vectors"].items()) {
        Eigen::VectorXd v(arr.size());
        for (std::size_t i = 0; i < arr.size(); ++i) v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
        va.set(label, std::move(v));
    }
    return va;
}

namespace {

std::ifstream open_in(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for reading");
    return f;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    return f;
}

} // namespace

void save_text(const std::string& path, const std::string& contents) {
    auto f = open_out(path);
    f << contents;
}

PartialMatrix load_pmx(const std::string& path) { auto f = open_in(path); return read_pmx(f); }
DenseMatrix load_dmx(const std::string& path) { auto f = open_in(path); return read_dmx(f); }
Factorization load_fac(const std::string& path) { auto f = open_in(path); return read_fac(f); }
Graph load_dimacs(const std::string& path) { auto f = open_in(path); return read_dimacs(f); }
Coloring load_coloring(const std::string& path) { auto f = open_in(path); return read_coloring(f); }
PartitionInstance load_partition_instance(const std::string& path) {
    auto f = open_in(path);
    return read_partition_instance(f);
}
OneInKSatInstance load_eoks(const std::string& path) { auto f = open_in(path); return read_eoks(f); }
GramConstraintSystem load_gram_system(const std::string& path) {
    auto f = open_in(path);
    return read_gram_system(f);
}
VectorAssignment load_vector_assignment(const std::string& path) {
    auto f = open_in(path);
    return read_vector_assignment(f);
}

void save_pmx(const std::string& path, const PartialMatrix& pm) { auto f = open_out(path); write_pmx(f, pm); }
void save_dmx(const std::string& path, const DenseMatrix& m) { auto f = open_out(path); write_dmx(f, m); }
void save_fac(const std::string& path, const Factorization& fact) { auto f = open_out(path); write_fac(f, fact); }
void save_dimacs(const std::string& path, const Graph& g) { auto f = open_out(path); write_dimacs(f, g); }
void save_coloring(const std::string& path, const Coloring& f_) { auto f = open_out(path); write_coloring(f, f_); }
void save_partition_instance(const std::string& path, const PartitionInstance& inst) {
    auto f = open_out(path);
    write_partition_instance(f, inst);
}
void save_eoks(const std::string& path, const OneInKSatInstance& inst) {
    auto f = open_out(path);
    write_eoks(f, inst);
}
void save_gram_system(const std::string& path, const GramConstraintSystem& sys) {
    auto f = open_out(path);
    write_gram_system(f, sys);
}
void save_vector_assignment(const std::string& path, const VectorAssignment& va) {
    auto f = open_out(path);
    write_vector_assignment(f, va);
}

} // namespace hardcomplete::io

#ifndef CSTAR_IO_HPP
#define CSTAR_IO_HPP

#include <cstar/graphalg.hpp>

#include <json.hpp>

#include <fstream>

// File schemas. All formats are JSON-compatible text with exact field names;
// unknown fields are rejected so typos fail loudly. Complex matrices are flat
// row-major lists of [re, im] pairs; shapes are implied by the surrounding
// structure.

namespace cstar {

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace ioutil {

using nlohmann::json;

inline void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                           const std::string& ctx) {
    if (!j.is_object()) throw SchemaError(ctx + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed)
            if (it.key() == a) ok = true;
        if (!ok) throw SchemaError(ctx + ": unknown field \"" + it.key() + "\"");
    }
}

inline const json& field(const json& j, const char* name, const std::string& ctx) {
    if (!j.contains(name))
        throw SchemaError(ctx + ": missing field \"" + name + "\"");
    return j.at(name);
}

inline Mat parse_matrix(const json& j, int rows, int cols, const std::string& ctx) {
    if (!j.is_array() || static_cast<int>(j.size()) != rows * cols)
        throw SchemaError(ctx + ": expected a flat list of " + std::to_string(rows * cols) +
                          " [re,im] pairs");
    Mat m(rows, cols);
    for (int i = 0; i < rows * cols; ++i) {
        const json& e = j.at(static_cast<size_t>(i));
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            throw SchemaError(ctx + ": matrix entries must be [re, im] pairs");
        m(i / cols, i % cols) = Complex(e[0].get<double>(), e[1].get<double>());
    }
    return m;
}

inline json dump_matrix(const Mat& m) {
    json out = json::array();
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c)
            out.push_back({m(r, c).real(), m(r, c).imag()});
    return out;
}

inline std::vector<int> parse_int_list(const json& j, const std::string& ctx) {
    if (!j.is_array()) throw SchemaError(ctx + ": expected an array of integers");
    std::vector<int> out;
    for (const auto& e : j) {
        if (!e.is_number_integer())
            throw SchemaError(ctx + ": expected an array of integers");
        out.push_back(e.get<int>());
    }
    return out;
}

}  // namespace ioutil

/// Correspondence file:
/// {"algebra":{"blocks":[...]}, "module":{"fibers":[...]},
///  "left_action":{"multiplicity":[[...],...], "unitaries":[...]}}
/// with "unitaries" optional (list of null-or-flat-matrix per fiber).
inline Correspondence parse_correspondence(const std::string& text) {
    using nlohmann::json;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("correspondence file syntax error: ") + e.what());
    }
    ioutil::reject_unknown(j, {"algebra", "module", "left_action"}, "correspondence file");
    const json& ja = ioutil::field(j, "algebra", "correspondence file");
    ioutil::reject_unknown(ja, {"blocks"}, "algebra");
    FdAlgebra alg(ioutil::parse_int_list(ioutil::field(ja, "blocks", "algebra"), "blocks"));

    const json& jm = ioutil::field(j, "module", "correspondence file");
    ioutil::reject_unknown(jm, {"fibers"}, "module");
    std::vector<int> fibers =
        ioutil::parse_int_list(ioutil::field(jm, "fibers", "module"), "fibers");
    HilbertModule mod(alg, fibers);

    const json& jl = ioutil::field(j, "left_action", "correspondence file");
    ioutil::reject_unknown(jl, {"multiplicity", "unitaries"}, "left_action");
    const json& jmult = ioutil::field(jl, "multiplicity", "left_action");
    int nf = static_cast<int>(fibers.size());
    if (!jmult.is_array() || static_cast<int>(jmult.size()) != nf)
        throw SchemaError("left_action: multiplicity must have one row per fiber");
    Eigen::MatrixXi mult(nf, alg.num_blocks());
    for (int r = 0; r < nf; ++r) {
        std::vector<int> row = ioutil::parse_int_list(jmult.at(static_cast<size_t>(r)), "multiplicity row");
        if (static_cast<int>(row.size()) != alg.num_blocks())
            throw SchemaError("left_action: multiplicity row length must equal block count");
        for (int c = 0; c < alg.num_blocks(); ++c) mult(r, c) = row[static_cast<size_t>(c)];
    }
    std::vector<Mat> uns;
    if (jl.contains("unitaries") && !jl.at("unitaries").is_null()) {
        const json& ju = jl.at("unitaries");
        if (!ju.is_array() || static_cast<int>(ju.size()) != nf)
            throw SchemaError("left_action: unitaries must have one entry per fiber");
        for (int r = 0; r < nf; ++r) {
            int k = fibers[static_cast<size_t>(r)];
            if (ju.at(static_cast<size_t>(r)).is_null())
                uns.push_back(Mat::Identity(k, k));
            else
                uns.push_back(ioutil::parse_matrix(ju.at(static_cast<size_t>(r)), k, k, "unitary"));
        }
    }
    return {std::move(mod), StarHom(alg, fibers, std::move(mult), std::move(uns))};
}

inline nlohmann::json dump_correspondence(const Correspondence& X) {
    using nlohmann::json;
    json j;
    j["algebra"] = {{"blocks", X.algebra().blocks}};
    j["module"] = {{"fibers", X.module.fibers}};
    json mult = json::array();
    for (int r = 0; r < X.left_action.multiplicity.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < X.left_action.multiplicity.cols(); ++c)
            row.push_back(X.left_action.multiplicity(r, c));
        mult.push_back(row);
    }
    j["left_action"] = {{"multiplicity", mult}};
    if (!X.left_action.unitaries.empty()) {
        json uns = json::array();
        for (const Mat& w : X.left_action.unitaries) uns.push_back(ioutil::dump_matrix(w));
        j["left_action"]["unitaries"] = uns;
    }
    return j;
}

/// Representation file: {"dim": N, "pi": [per block: [per matrix unit: flat
/// matrix]], "t": [per fiber: [per fiber unit: flat matrix]]}; basis entries
/// are row-major over the unit indices.
inline Representation parse_representation(const std::string& text,
                                           const Correspondence& X) {
    using nlohmann::json;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("representation file syntax error: ") + e.what());
    }
    ioutil::reject_unknown(j, {"dim", "pi", "t"}, "representation file");
    const json& jd = ioutil::field(j, "dim", "representation file");
    if (!jd.is_number_integer() || jd.get<int>() < 0)
        throw SchemaError("representation file: dim must be a nonnegative integer");
    int dim = jd.get<int>();

    const FdAlgebra& alg = X.algebra();
    const json& jp = ioutil::field(j, "pi", "representation file");
    if (!jp.is_array() || static_cast<int>(jp.size()) != alg.num_blocks())
        throw SchemaError("representation file: pi must have one entry per block");
    std::vector<std::vector<Mat>> pi_basis;
    for (int b = 0; b < alg.num_blocks(); ++b) {
        int n = alg.block_size(b);
        const json& jb = jp.at(static_cast<size_t>(b));
        if (!jb.is_array() || static_cast<int>(jb.size()) != n * n)
            throw SchemaError("representation file: pi block " + std::to_string(b) +
                              " must list " + std::to_string(n * n) + " matrices");
        std::vector<Mat> mats;
        for (const auto& e : jb) mats.push_back(ioutil::parse_matrix(e, dim, dim, "pi matrix"));
        pi_basis.push_back(std::move(mats));
    }

    const json& jt = ioutil::field(j, "t", "representation file");
    if (!jt.is_array() || static_cast<int>(jt.size()) != X.module.num_fibers())
        throw SchemaError("representation file: t must have one entry per fiber");
    std::vector<std::vector<Mat>> t_basis;
    for (int f = 0; f < X.module.num_fibers(); ++f) {
        int cnt = X.module.fiber_dim(f) * alg.block_size(f);
        const json& jf = jt.at(static_cast<size_t>(f));
        if (!jf.is_array() || static_cast<int>(jf.size()) != cnt)
            throw SchemaError("representation file: t fiber " + std::to_string(f) +
                              " must list " + std::to_string(cnt) + " matrices");
        std::vector<Mat> mats;
        for (const auto& e : jf) mats.push_back(ioutil::parse_matrix(e, dim, dim, "t matrix"));
        t_basis.push_back(std::move(mats));
    }
    return {X, dim, std::move(pi_basis), std::move(t_basis)};
}

inline nlohmann::json dump_representation(const Representation& R) {
    using nlohmann::json;
    json j;
    j["dim"] = R.dim;
    json jp = json::array();
    for (const auto& blk : R.pi_basis) {
        json jb = json::array();
        for (const Mat& m : blk) jb.push_back(ioutil::dump_matrix(m));
        jp.push_back(jb);
    }
    j["pi"] = jp;
    json jt = json::array();
    for (const auto& fib : R.t_basis) {
        json jf = json::array();
        for (const Mat& m : fib) jf.push_back(ioutil::dump_matrix(m));
        jt.push_back(jf);
    }
    j["t"] = jt;
    return j;
}

struct CkFamily {
    int dim = 0;
    std::map<std::string, Mat> projections;
    std::map<std::string, Mat> isometries;
};

/// CK family file: {"dim":N, "projections":{v: flat matrix}, "isometries":{e: flat matrix}}.
inline CkFamily parse_ck_family(const std::string& text) {
    using nlohmann::json;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("family file syntax error: ") + e.what());
    }
    ioutil::reject_unknown(j, {"dim", "projections", "isometries"}, "family file");
    const json& jd = ioutil::field(j, "dim", "family file");
    if (!jd.is_number_integer() || jd.get<int>() <= 0)
        throw SchemaError("family file: dim must be a positive integer");
    CkFamily fam;
    fam.dim = jd.get<int>();
    const json& jp = ioutil::field(j, "projections", "family file");
    if (!jp.is_object()) throw SchemaError("family file: projections must be an object");
    for (auto it = jp.begin(); it != jp.end(); ++it)
        fam.projections[it.key()] =
            ioutil::parse_matrix(it.value(), fam.dim, fam.dim, "projection " + it.key());
    const json& ji = ioutil::field(j, "isometries", "family file");
    if (!ji.is_object()) throw SchemaError("family file: isometries must be an object");
    for (auto it = ji.begin(); it != ji.end(); ++it)
        fam.isometries[it.key()] =
            ioutil::parse_matrix(it.value(), fam.dim, fam.dim, "isometry " + it.key());
    return fam;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SchemaError("cannot write file: " + path);
    out << content;
}

}  // namespace cstar

#endif  // CSTAR_IO_HPP

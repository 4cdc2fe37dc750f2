#include "arqft/ternary.hpp"

#include "arqft/errors.hpp"

#include <json.hpp>

namespace arqft {

Vec3 zero_vec3(const PrimeModulus& F) { return {Poly(F), Poly(F), Poly(F)}; }

Mat3 identity_mat3(const PrimeModulus& F) {
    Mat3 m{zero_vec3(F), zero_vec3(F), zero_vec3(F)};
    for (int i = 0; i < 3; ++i) m[i][i] = Poly::constant(F, 1);
    return m;
}

Mat3 mat3_mul(const Mat3& a, const Mat3& b) {
    const PrimeModulus& F = a[0][0].field();
    Mat3 r{zero_vec3(F), zero_vec3(F), zero_vec3(F)};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) r[i][j] += a[i][k] * b[k][j];
    return r;
}

Mat3 mat3_transpose(const Mat3& a) {
    Mat3 r = a;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[i][j] = a[j][i];
    return r;
}

Poly mat3_det(const Mat3& a) {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

Vec3 mat3_apply(const Mat3& a, const Vec3& v) {
    Vec3 r = zero_vec3(a[0][0].field());
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) r[i] += a[i][k] * v[k];
    return r;
}

Vec3 column(const Mat3& a, int j) { return {a[0][j], a[1][j], a[2][j]}; }

TernaryForm::TernaryForm(Mat3 gram) : g_(std::move(gram)) {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (g_[i][j] != g_[j][i]) throw PreconditionError("Gram matrix is not symmetric");
    if (determinant().is_zero()) throw PreconditionError("degenerate ternary form");
}

TernaryForm TernaryForm::from_coefficients(const Poly& x2, const Poly& y2, const Poly& z2,
                                           const Poly& xy, const Poly& xz, const Poly& yz) {
    const PrimeModulus& F = x2.field();
    const Coeff half = F.inv(2);
    Mat3 g{zero_vec3(F), zero_vec3(F), zero_vec3(F)};
    g[0][0] = x2;
    g[1][1] = y2;
    g[2][2] = z2;
    g[0][1] = g[1][0] = xy.scaled(half);
    g[0][2] = g[2][0] = xz.scaled(half);
    g[1][2] = g[2][1] = yz.scaled(half);
    return TernaryForm(std::move(g));
}

TernaryForm TernaryForm::diagonal(const Poly& a, const Poly& b, const Poly& c) {
    const PrimeModulus& F = a.field();
    Mat3 g{zero_vec3(F), zero_vec3(F), zero_vec3(F)};
    g[0][0] = a;
    g[1][1] = b;
    g[2][2] = c;
    return TernaryForm(std::move(g));
}

Poly TernaryForm::bilinear(const Vec3& u, const Vec3& v) const {
    Poly r(field());
    for (int i = 0; i < 3; ++i) {
        if (u[i].is_zero()) continue;
        Poly row(field());
        for (int j = 0; j < 3; ++j)
            if (!v[j].is_zero()) row += g_[i][j] * v[j];
        r += u[i] * row;
    }
    return r;
}

Poly TernaryForm::evaluate(const Vec3& v) const { return bilinear(v, v); }

TernaryForm TernaryForm::transformed(const Mat3& b) const {
    return TernaryForm(mat3_mul(mat3_transpose(b), mat3_mul(g_, b)));
}

std::string TernaryForm::to_json() const {
    nlohmann::json j;
    j["p"] = field().p();
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < 3; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int k = 0; k < 3; ++k) row.push_back(g_[i][k].to_string());
        rows.push_back(row);
    }
    j["gram"] = rows;
    return j.dump();
}

TernaryForm TernaryForm::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw PreconditionError(std::string("form JSON: ") + e.what());
    }
    if (!j.contains("p")) throw PreconditionError("form JSON: missing p");
    const PrimeModulus& F = PrimeModulus::get(j.at("p").get<std::uint32_t>());
    if (j.contains("gram")) {
        const auto& rows = j.at("gram");
        if (!rows.is_array() || rows.size() != 3) throw PreconditionError("form JSON: gram must be 3x3");
        Mat3 g{zero_vec3(F), zero_vec3(F), zero_vec3(F)};
        for (int i = 0; i < 3; ++i) {
            if (!rows[i].is_array() || rows[i].size() != 3) throw PreconditionError("form JSON: gram must be 3x3");
            for (int k = 0; k < 3; ++k) g[i][k] = parse_poly(F, rows[i][k].get<std::string>());
        }
        return TernaryForm(std::move(g));
    }
    if (j.contains("coefficients")) {
        const auto& c = j.at("coefficients");
        auto get = [&](const char* key) {
            return c.contains(key) ? parse_poly(F, c.at(key).get<std::string>()) : Poly(F);
        };
        return from_coefficients(get("x2"), get("y2"), get("z2"), get("xy"), get("xz"), get("yz"));
    }
    throw PreconditionError("form JSON: need gram or coefficients");
}

}  // namespace arqft

#pragma once

#include "arqft/field.hpp"

#include <array>
#include <string>

namespace arqft {

using Vec3 = std::array<Poly, 3>;
using Mat3 = std::array<std::array<Poly, 3>, 3>;

Vec3 zero_vec3(const PrimeModulus& F);
Mat3 identity_mat3(const PrimeModulus& F);
Mat3 mat3_mul(const Mat3& a, const Mat3& b);
Mat3 mat3_transpose(const Mat3& a);
Poly mat3_det(const Mat3& a);
Vec3 mat3_apply(const Mat3& a, const Vec3& v);
Vec3 column(const Mat3& a, int j);

// Gram matrix over F_p[T]; entry (i,j) = B(e_i, e_j)
class TernaryForm {
public:
    // throws PreconditionError on an asymmetric or degenerate Gram matrix
    explicit TernaryForm(Mat3 gram);
    // Q = x2 X^2 + y2 Y^2 + z2 Z^2 + xy XY + xz XZ + yz YZ
    static TernaryForm from_coefficients(const Poly& x2, const Poly& y2, const Poly& z2,
                                         const Poly& xy, const Poly& xz, const Poly& yz);
    static TernaryForm diagonal(const Poly& a, const Poly& b, const Poly& c);

    const Mat3& gram() const { return g_; }
    const Poly& entry(int i, int j) const { return g_[i][j]; }
    const PrimeModulus& field() const { return g_[0][0].field(); }

    Poly evaluate(const Vec3& v) const;
    Poly bilinear(const Vec3& u, const Vec3& v) const;
    Poly determinant() const { return mat3_det(g_); }
    // Gram of the lattice with basis the columns of b: b^T A b
    TernaryForm transformed(const Mat3& b) const;

    std::string to_json() const;
    static TernaryForm from_json(const std::string& text);

    friend bool operator==(const TernaryForm& a, const TernaryForm& b) { return a.g_ == b.g_; }

private:
    Mat3 g_;
};

}  // namespace arqft

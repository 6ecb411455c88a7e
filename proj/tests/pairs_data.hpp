#pragma once

// Test oracle data: the three canonical 3x3 Hermitian pairs and the 6x6
// matrices their form products expand to, transcribed independently of the
// library's multiply_forms.  Entries are indexed by veronese_basis(2, 2) =
// (200),(110),(101),(020),(011),(002).

#include "hq/forms.hpp"

namespace hq::pairs {

inline MatrixK m3(std::initializer_list<FieldElement> vals) {
    MatrixK m(3, 3);
    int k = 0;
    for (const auto& v : vals) {
        m(k / 3, k % 3) = v;
        ++k;
    }
    return m;
}
inline MatrixK m6(std::initializer_list<FieldElement> vals) {
    MatrixK m(6, 6);
    int k = 0;
    for (const auto& v : vals) {
        m(k / 6, k % 6) = v;
        ++k;
    }
    return m;
}

inline FieldElement I() { return FieldElement::i(); }

// (J, A) with the Delta_2 block in J; sign = +1 is the printed pair, sign = -1
// the related one.
inline HermitianForm delta2_J(int sign) {
    FieldElement s(sign);
    return HermitianForm(2, 1, m3({1, 0, 0, 0, 0, s, 0, s, 0}));
}
inline HermitianForm delta2_A(const FieldElement& a, const FieldElement& b, int sign) {
    FieldElement s(sign);
    return HermitianForm(2, 1, m3({a, 0, 0, 0, 0, b, 0, b, s}));
}

// anti-diagonal pair
inline HermitianForm antidiag_J() {
    return HermitianForm(2, 1, m3({0, 0, 1, 0, 1, 0, 1, 0, 0}));
}
inline HermitianForm antidiag_A(const FieldElement& a) {
    return HermitianForm(2, 1, m3({0, 0, a, 0, a, 1, a, 1, 0}));
}

// complex-parameter pair (shares delta2_J(+1))
inline HermitianForm complex_A(const FieldElement& a, const FieldElement& b,
                               const FieldElement& g) {
    FieldElement lo = b - I() * g, hi = b + I() * g;
    return HermitianForm(2, 1, m3({a, 0, 0, 0, 0, lo, 0, hi, 0}));
}

inline MatrixK form1B(const FieldElement& a, const FieldElement& b, int sign) {
    FieldElement z(0), one(1);
    if (sign > 0) {
        FieldElement ab = a + b, b2 = FieldElement(2) * b;
        return m6({a, z, z,  z, z,  z,   //
                   z, z, ab, z, z,  z,   //
                   z, ab, one, z, z, z,  //
                   z, z, z,  z, z,  b,   //
                   z, z, z,  z, b2, one, //
                   z, z, z,  b, one, z});
    }
    // hand expansion for the related pair (J with -1 entries, A with -1 corner)
    FieldElement ba = b - a, mb = -b, m2b = FieldElement(-2) * b, mone(-1);
    return m6({a, z, z,  z, z,  z,    //
               z, z, ba, z, z,  z,    //
               z, ba, mone, z, z, z,  //
               z, z, z,  z, z,  mb,   //
               z, z, z,  z, m2b, one, //
               z, z, z,  mb, one, z});
}

inline MatrixK form2B(const FieldElement& a) {
    FieldElement z(0), one(1), a2 = FieldElement(2) * a;
    return m6({z, z, z,  z, z,  a,   //
               z, z, z,  z, a2, one, //
               z, z, a2, z, one, z,  //
               z, z, z,  a, one, z,  //
               z, a2, one, one, z, z, //
               a, one, z, z, z,  z});
}

inline MatrixK form3B(const FieldElement& a, const FieldElement& b, const FieldElement& g) {
    FieldElement z(0);
    FieldElement lo = b - I() * g, hi = b + I() * g;
    FieldElement alo = a + b - I() * g, ahi = a + b + I() * g, b2 = FieldElement(2) * b;
    return m6({a, z, z,  z, z,  z,  //
               z, z, alo, z, z, z,  //
               z, ahi, z, z, z,  z, //
               z, z, z,  z, z,  lo, //
               z, z, z,  z, b2, z,  //
               z, z, z,  hi, z, z});
}

}  // namespace hq::pairs

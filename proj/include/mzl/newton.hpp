#pragma once
#include <vector>

#include "mzl/rational.hpp"

namespace mzl {

// One facet inequality with integer-primitive data. Orientation depends on
// the polyhedron kind: <a,x> <= m for hulls closed under -R+^n (exponents at
// infinity), <a,x> >= m for hulls closed under +R+^n. Always a >= 0.
struct Facet {
    RatVec normal;
    Rat offset;
};

// conv(generators) - R+^n. Budget: dimension <= 8.
struct PolyhedronAtInfinity {
    int n = 0;
    std::vector<RatVec> generators;
    std::vector<RatVec> vertices;
    std::vector<Facet> facets;  // <a,x> <= m
};

// conv(generators) + R+^n.
struct NewtonPolyhedron {
    int n = 0;
    std::vector<RatVec> generators;
    std::vector<Facet> facets;  // <a,x> >= m
};

// A face exposed by a supporting direction a >= 0.
struct Face {
    RatVec witness;                  // a, integer-primitive
    Rat value;                       // support value m(a)
    std::vector<RatVec> active;      // generators / vertices on the face
    std::vector<int> recession_axes; // coordinate rays e_i inside the face
    int dim = 0;
    int codim = 0;
};

PolyhedronAtInfinity polyhedron_at_infinity(const std::vector<RatVec>& points);
NewtonPolyhedron newton_polyhedron(const std::vector<RatVec>& points);

// Data of the smallest face of E containing the last diagonal point
// lambda* . (1,...,1) inside E; sigma0 = 1/lambda*, rho0 = its codimension.
struct DiagonalFace {
    Rat sigma0;
    int rho0 = 0;
    Face face;
    std::vector<int> active_facets;
};
DiagonalFace diagonal_face(const PolyhedronAtInfinity& E);

// First point where the diagonal ray enters conv(points) + R+^n, the face it
// lands on, and the normalized polar vector c with <c,x> = 1 on that face.
// c is strictly positive exactly when the face is compact.
struct DiagonalEntry {
    Rat lambda;
    std::vector<int> active_facets;
    std::vector<RatVec> face_points;  // generators on the face
    bool compact = false;
    RatVec c;
};
DiagonalEntry diagonal_entry(const NewtonPolyhedron& E);

// {x >= 0 : <beta,x> >= 1 for all beta in I} with enumerated vertices.
// Budget: n <= 8, |I| <= 20.
struct HalfspacePolyhedron {
    int n = 0;
    std::vector<RatVec> I;
    std::vector<RatVec> vertices;
};
HalfspacePolyhedron halfspace_polyhedron(const std::vector<RatVec>& I);

// Face of smallest <a,.> over the polyhedron; a >= 0, a != 0.
Face first_meet_locus(const HalfspacePolyhedron& S, const RatVec& a);

// iota = min l1-norm over the polyhedron; face = first_meet_locus at 1.
struct IndexData {
    Rat iota;
    Face face;
};
IndexData index_of(const HalfspacePolyhedron& S);

// v in cone(generators) (closed) or in the strictly-positive-coefficient
// cone (open), with an exact coefficient certificate when inside.
struct ConeMembership {
    bool inside = false;
    RatVec certificate;  // lambda per generator; empty when outside
};
ConeMembership cone_membership(const RatVec& v, const std::vector<RatVec>& generators,
                               bool open);

// Extreme rays + lineality basis of {x : <h,x> >= 0 for all h}. Exact double
// description; rays come back integer-primitive and deduplicated.
struct ConeRays {
    std::vector<RatVec> rays;
    std::vector<RatVec> lineality;
};
ConeRays dual_cone_rays(const std::vector<RatVec>& halfspaces, int dim);

}  // namespace mzl

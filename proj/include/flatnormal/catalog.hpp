#pragma once

#include "flatnormal/chart.hpp"

#include <map>
#include <string>
#include <vector>

namespace flatnormal {

/// What a catalog entry claims about itself; every claim is re-derived by
/// the verification modules in the registration tests.
struct ExpectedProperties {
    bool flat_normal_bundle = true;
    bool positive_C = true;      // c < c~
    bool simple_principal = true;  // s = n with multiplicity one everywhere
    bool constant_curvature = true;
};

struct CatalogEntry {
    std::string name;
    std::string description;
    ImmersionChart chart;
    int codimension = 1;  // p
    ExpectedProperties expected;
    Eigen::VectorXd anchor;  // default base point x0
    std::map<std::string, double> diagnostics;
};

CatalogEntry pseudosphere();
CatalogEntry dini(double a, double b);
CatalogEntry product_torus_r4(double r1, double r2);
CatalogEntry clifford_torus_s3(double t);
CatalogEntry sphere_negative_control(double c);
CatalogEntry flat_plane();
CatalogEntry equatorial_sphere_s3();
CatalogEntry hyperbolic_plane(double c);
CatalogEntry pseudosphere_times_line();
CatalogEntry veronese_r5();

struct CatalogListing {
    std::string name;
    std::string parameters;  // e.g. "a=1 b=0.5"
    std::string description;
};

std::vector<CatalogListing> catalog_listing();

/// Entry by name with optional positional parameters (defaults otherwise).
CatalogEntry make_entry(const std::string& name, const std::vector<double>& params = {});

}  // namespace flatnormal

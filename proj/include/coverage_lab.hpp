#ifndef COVERAGE_LAB_HPP
#define COVERAGE_LAB_HPP

#include "coverage_lab/errors.hpp"
#include "coverage_lab/geometry.hpp"
#include "coverage_lab/sampling.hpp"
#include "coverage_lab/expr.hpp"
#include "coverage_lab/region.hpp"
#include "coverage_lab/classifier.hpp"
#include "coverage_lab/spec_io.hpp"
#include "coverage_lab/coverage.hpp"
#include "coverage_lab/parallel.hpp"
#include "coverage_lab/structure.hpp"
#include "coverage_lab/report.hpp"
#include "coverage_lab/field.hpp"
#include "coverage_lab/verify.hpp"

#endif  // COVERAGE_LAB_HPP

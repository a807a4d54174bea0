#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "greenkernel/interpolation.hpp"
#include "greenkernel/kernel_catalog.hpp"
#include "greenkernel/operator_symbols.hpp"
#include "greenkernel/poly_space.hpp"
#include "greenkernel/rkhs_kernel.hpp"
#include "greenkernel/sobolev_verify.hpp"

namespace greenkernel {

// Key order is insertion order, so equal inputs give byte-identical output.
// Doubles are written in the shortest form that parses back to the same
// bits; non-finite values become null.
using Json = nlohmann::ordered_json;

Json to_json(const KernelSpec& spec);
Json to_json(const GreenKernel& kernel);
Json to_json(const PolySpace& space);
Json to_json(const InterpolationModel& model);
Json to_json(const OperatorVector& op);
Json to_json(const RkKernel& rk);
Json to_json(const SeminormReport& report);
Json to_json(const ScaledComparison& report);
Json to_json(const PdReport& report);
Json to_json(const EquivalenceReport& report);
Json to_json(const OrderEstimate& estimate);
Json to_json(const HypothesisReport& report);
Json to_json(const LoocvResult& result);
Json to_json(const ScaleSweep& sweep);
Json to_json(const OrthogonalityReport& report);
Json to_json(const CpdCheckReport& report);
Json to_json(const Eigen::VectorXd& v);
Json to_json(const Eigen::MatrixXd& m);  // list of rows

// The readers throw ValidationError on missing fields or wrong types.
KernelSpec kernel_spec_from_json(const Json& j);
PolySpace poly_space_from_json(const Json& j);
InterpolationModel model_from_json(const Json& j);
OperatorVector operator_from_json(const Json& j);
RkKernel rk_from_json(const Json& j);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// CSV with a header row: x1..xd,y for datasets; x1..xd (a trailing y column
// is ignored) for evaluation points.
Dataset read_dataset_csv(std::istream& in);
Dataset read_dataset_csv(const std::string& path);
PointSet read_points_csv(std::istream& in, int dim);
PointSet read_points_csv(const std::string& path, int dim);
// Writes x1..xd,y rows with 17 significant digits.
void write_csv(std::ostream& out, const PointSet& points, const Eigen::VectorXd& values);

std::string format_double(double v);

}  // namespace greenkernel

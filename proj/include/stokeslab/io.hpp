#ifndef STOKESLAB_IO_HPP
#define STOKESLAB_IO_HPP

#include <string>

#include <json.hpp>

#include "stokeslab/euler.hpp"
#include "stokeslab/laplace.hpp"
#include "stokeslab/newton.hpp"
#include "stokeslab/spider.hpp"
#include "stokeslab/stokes.hpp"

namespace stokeslab {

using Json = nlohmann::ordered_json;

Json rat_to_json(const Rat& q);
Rat rat_from_json(const Json& j);
Json grat_to_json(const GRat& z);
GRat grat_from_json(const Json& j);
Json ray_to_json(const Ray& u);
Ray ray_from_json(const Json& j);
Json matrix_to_json(const QMatrix& m);
QMatrix matrix_from_json(const Json& j);

Json stokes_to_json(const StokesSystem& sys);
StokesSystem stokes_from_json(const Json& j);
Json spider_to_json(const SpiderSheaf& sp);
SpiderSheaf spider_from_json(const Json& j);
Json costokes_to_json(const CoStokesSystem& co);
CoStokesSystem costokes_from_json(const Json& j);
Json cellsheaf_to_json(const CellSheaf& f);
CellSheaf cellsheaf_from_json(const Json& j);

ElementaryModel model_from_json(const Json& j);
Json model_to_json(const ElementaryModel& m);
TwistConfig twist_from_json(const Json& j);
ResidueMatrix residues_from_json(const Json& j);

Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);

}  // namespace stokeslab

#endif

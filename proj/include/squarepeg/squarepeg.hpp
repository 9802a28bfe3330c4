#pragma once

#include "squarepeg/curve_io.hpp"
#include "squarepeg/curves.hpp"
#include "squarepeg/errors.hpp"
#include "squarepeg/fixtures.hpp"
#include "squarepeg/model_verifier.hpp"
#include "squarepeg/pipeline.hpp"
#include "squarepeg/report.hpp"
#include "squarepeg/square_finder.hpp"
#include "squarepeg/torus.hpp"

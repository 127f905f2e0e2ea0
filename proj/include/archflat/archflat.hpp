#pragma once

#include "closed_form.hpp"
#include "errors.hpp"
#include "flatband.hpp"
#include "floquet.hpp"
#include "format.hpp"
#include "graph_io.hpp"
#include "hermitian.hpp"
#include "periodic_graph.hpp"
#include "tilings.hpp"
#include "torus_oracle.hpp"
#include "verify.hpp"

#pragma once

#include "phdae/csv.hpp"
#include "phdae/diagnostics.hpp"
#include "phdae/errors.hpp"
#include "phdae/gauss.hpp"
#include "phdae/gauss_identities.hpp"
#include "phdae/initial_state.hpp"
#include "phdae/integrate.hpp"
#include "phdae/legendre.hpp"
#include "phdae/model.hpp"
#include "phdae/params.hpp"
#include "phdae/pc.hpp"
#include "phdae/states.hpp"
#include "phdae/tableau.hpp"
#include "phdae/types.hpp"

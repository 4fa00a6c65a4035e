#pragma once

#include "roomforge/catalog.hpp"
#include "roomforge/cdf.hpp"
#include "roomforge/config.hpp"
#include "roomforge/cssg.hpp"
#include "roomforge/eval.hpp"
#include "roomforge/geometry.hpp"
#include "roomforge/instruct.hpp"
#include "roomforge/relation.hpp"
#include "roomforge/relations.hpp"
#include "roomforge/render.hpp"
#include "roomforge/rng.hpp"
#include "roomforge/room.hpp"
#include "roomforge/tasking.hpp"
#include "roomforge/world.hpp"

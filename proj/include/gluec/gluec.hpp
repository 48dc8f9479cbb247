#pragma once

#include "gluec/api_model.hpp"
#include "gluec/commands.hpp"
#include "gluec/defs_parser.hpp"
#include "gluec/diagnostic.hpp"
#include "gluec/emitter.hpp"
#include "gluec/glue_plan.hpp"
#include "gluec/handle_registry.hpp"
#include "gluec/kernels.hpp"
#include "gluec/marshal.hpp"
#include "gluec/mock_toolkit.hpp"
#include "gluec/modulation.hpp"
#include "gluec/overrides.hpp"
#include "gluec/runtime.hpp"
#include "gluec/session.hpp"
#include "gluec/sexpr.hpp"
#include "gluec/typemap.hpp"
#include "gluec/value.hpp"

"""JSON Schemas for every document the package reads or writes."""

_PAIR = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_MATRIX = {"type": "array", "minItems": 1, "items": {"type": "array", "minItems": 1, "items": _PAIR}}
_REAL_MATRIX = {"type": "array", "items": {"type": "array", "items": {"type": "number"}}}

TORUS_SUP = {
    "type": "object",
    "required": ["best_value", "best_point", "certified_upper", "grid_step", "lipschitz_bound",
                 "grid_max", "grid_points_per_dim", "num_vars"],
    "properties": {
        "best_value": {"type": "number"},
        "best_point": {"type": "array", "items": {"type": "number", "minimum": 0}},
        "certified_upper": {"type": "number"},
        "grid_step": {"type": "number", "exclusiveMinimum": 0},
        "lipschitz_bound": {"type": "number", "minimum": 0},
        "grid_max": {"type": "number"},
        "grid_points_per_dim": {"type": "integer", "minimum": 4},
        "num_vars": {"type": "integer", "minimum": 1},
        "reduction": {"type": "string"},
    },
}

CERTIFICATE = {
    "type": "object",
    "required": ["schema", "n", "d", "a1", "a2", "a3", "b1", "b2", "witness", "lhs_lower",
                 "rhs_result", "ratio_lower", "violation", "seed", "search_meta", "digest"],
    "properties": {
        "schema": {"const": "vn-gap-cert/1"},
        "n": {"type": "integer", "minimum": 1},
        "d": {"type": "integer", "minimum": 2},
        "a1": _MATRIX, "a2": _MATRIX, "a3": _MATRIX, "b1": _MATRIX, "b2": _MATRIX,
        "witness": {"type": "array", "items": _PAIR},
        "lhs_lower": {"type": "number", "minimum": 0},
        "rhs_result": TORUS_SUP,
        "ratio_lower": {"type": "number"},
        "violation": {"type": "boolean"},
        "seed": {"type": "integer"},
        "search_meta": {"type": "object"},
        "digest": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
        "timing": {"type": "object"},
    },
    "additionalProperties": False,
}

POLYNOMIAL = {
    "type": "object",
    "required": ["num_vars", "coeff_dim", "terms"],
    "properties": {
        "schema": {"const": "vn-poly/1"},
        "num_vars": {"type": "integer", "minimum": 1},
        "coeff_dim": {"type": "integer", "minimum": 1},
        "terms": {"type": "array", "items": {
            "type": "object",
            "required": ["multi_index", "coeff_real", "coeff_imag"],
            "properties": {
                "multi_index": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                "coeff_real": _REAL_MATRIX,
                "coeff_imag": _REAL_MATRIX,
            },
        }},
    },
}

TUPLE = {
    "type": "object",
    "required": ["operators"],
    "properties": {
        "schema": {"const": "vn-tuple/1"},
        "operators": {"type": "array", "minItems": 1, "items": _MATRIX},
        "commutativity_tol": {"type": ["number", "null"]},
        "contraction_tol": {"type": ["number", "null"]},
    },
}

MATRIX_DOC = {
    "type": "object",
    "required": ["matrix"],
    "properties": {"schema": {"const": "vn-matrix/1"}, "matrix": _MATRIX},
}

B_PAIR = {
    "type": "object",
    "required": ["b1", "b2"],
    "properties": {"schema": {"const": "vn-bpair/1"}, "b1": _MATRIX, "b2": _MATRIX},
}

INEQUALITY_REPORT = {
    "type": "object",
    "required": ["lhs", "rhs", "ratio", "holds", "tol", "digest"],
    "properties": {
        "lhs": {"type": "number"}, "rhs": {"type": "number"}, "ratio": {"type": "number"},
        "holds": {"type": "boolean"}, "tol": {"type": "number"}, "digest": {"type": "string"},
    },
}

SUITE_REPORT = {
    "type": "object",
    "required": ["name", "trials", "seed", "tol", "max_ratio", "passed", "failures"],
    "properties": {
        "name": {"enum": ["remark1", "n1", "ando"]},
        "trials": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer"},
        "tol": {"type": "number"},
        "max_ratio": {"type": "number"},
        "passed": {"type": "boolean"},
        "failures": {"type": "array"},
        "elapsed_s": {"type": "number"},
    },
}

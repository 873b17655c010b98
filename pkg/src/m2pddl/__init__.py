"""Compile PDDL-annotated system models and product data into PDDL, then plan and validate."""

from .diagnostics import Diagnostic, DiagnosticError
from .fixtures import build_aircraft_fixture
from .generator import GenerationReport, PipelineConfig, generate_domain, generate_problem, render, run_pipeline
from .model import ModelDocument, identify_relevant, load_model, save_model, select_scope
from .pddl import (
    PddlDomain,
    PddlProblem,
    parse_domain,
    parse_problem,
    print_domain,
    print_problem,
    validate_domain,
    validate_problem,
)
from .planner import Plan, ground, solve, validate_plan
from .product import ProductRecordSet, load_product_data
from .profile import CATALOG, annotate_product, bind_actions, bind_static, check_profile

__version__ = "0.1.0"

"""Assemble PDDL ASTs from bindings, render them, and drive the whole pipeline."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .diagnostics import Diagnostic, DiagnosticError, error, has_errors
from .model import load_model, select_scope
from .pddl import (
    PddlDomain,
    PddlProblem,
    is_identifier,
    parse_domain,
    parse_problem,
    print_domain,
    print_problem,
    validate_domain,
    validate_problem,
)
from .product import load_product_data
from .profile import Annotations, DomainBinding, annotate_product, bind_actions, bind_static, check_profile, load_rules


@dataclass(frozen=True)
class PipelineConfig:
    problem_name: str
    rules_path: Optional[str] = None
    output_dir: str = "."
    key_column: str = "id"
    scope_root: Optional[str] = None

    def __post_init__(self):
        if not is_identifier(self.problem_name):
            raise ValueError(f"problem name {self.problem_name!r} is not a legal PDDL identifier")

    @property
    def domain_filename(self) -> str:
        return f"{self.problem_name}.domain.pddl"

    @property
    def problem_filename(self) -> str:
        return f"{self.problem_name}.problem.pddl"


@dataclass
class GenerationReport:
    domain_path: Optional[str] = None
    problem_path: Optional[str] = None
    counts: dict = field(default_factory=dict)
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.domain_path is not None and not has_errors(self.diagnostics)

    def to_dict(self) -> dict:
        return {
            "domain_path": self.domain_path,
            "problem_path": self.problem_path,
            "counts": dict(self.counts),
            "diagnostics": [d.to_dict() for d in self.diagnostics],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def generate_domain(binding: DomainBinding) -> PddlDomain:
    """Build the domain; requirements follow from what the content uses."""
    types = tuple(binding.types.values())
    predicates = tuple(binding.predicates.values())
    actions = tuple(binding.actions.values())
    reqs = {":strips"}
    if types or any(p.params for p in predicates) or any(a.params for a in actions):
        reqs.add(":typing")
    if any(not lit.positive for a in actions for lit in a.precondition):
        reqs.add(":negative-preconditions")
    domain = PddlDomain(binding.domain_name, frozenset(reqs), types, predicates, actions)
    problems = [d for d in validate_domain(domain) if d.is_error]
    if problems:
        raise DiagnosticError(problems)
    return domain


def generate_problem(binding: DomainBinding, annotations: Annotations, config: PipelineConfig) -> PddlProblem:
    model_objects = list(binding.objects.values())
    model_names = {name for name, _ in model_objects}
    clashes = [name for name, _ in annotations.objects if name in model_names]
    if clashes:
        raise DiagnosticError(
            [error("object-name-collision", f"product object {n} duplicates a model object", f"object:{n}") for n in clashes]
        )
    goal = tuple(dict.fromkeys([*binding.goal.values(), *annotations.goal]))
    if not goal:
        raise DiagnosticError([error("empty-goal", "no goal atoms from model or product data", "goal")])
    problem = PddlProblem(
        config.problem_name,
        binding.domain_name,
        tuple(model_objects) + tuple(annotations.objects),
        frozenset(binding.init.values()) | frozenset(annotations.init),
        goal,
    )
    problems = [d for d in validate_problem(problem, generate_domain(binding)) if d.is_error]
    if problems:
        raise DiagnosticError(problems)
    return problem


def count_report(domain: PddlDomain, problem: PddlProblem) -> dict:
    return {
        "types": len(domain.types),
        "predicates": len(domain.predicates),
        "actions": len(domain.actions),
        "objects": len(problem.objects),
        "init-atoms": len(problem.init),
        "goal-atoms": len(problem.goal),
    }


def render(domain: PddlDomain, problem: PddlProblem, config: PipelineConfig) -> GenerationReport:
    """Write ``<name>.domain.pddl`` and ``<name>.problem.pddl`` into the output directory."""
    if not problem.goal:
        raise DiagnosticError([error("empty-goal", "refusing to render a problem with an empty goal", "goal")])
    domain_text = print_domain(domain) + "\n"
    problem_text = print_problem(problem, domain) + "\n"
    out_dir = Path(config.output_dir)
    domain_path = out_dir / config.domain_filename
    problem_path = out_dir / config.problem_filename
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        if not os.access(out_dir, os.W_OK):
            raise PermissionError(f"{out_dir} is not writable")
        domain_path.write_text(domain_text, encoding="utf-8")
        problem_path.write_text(problem_text, encoding="utf-8")
    except OSError as exc:
        raise DiagnosticError([error("io-error", str(exc), str(out_dir))]) from None
    return GenerationReport(str(domain_path), str(problem_path), count_report(domain, problem))


def _read(path, stage: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise DiagnosticError([error("io-error", str(exc), str(path))]).with_stage(stage) from None


def _verify(report: GenerationReport) -> list[Diagnostic]:
    """Re-read rendered files; any complaint here is a generator bug."""
    try:
        domain = parse_domain(Path(report.domain_path).read_text(encoding="utf-8"))
        problem = parse_problem(Path(report.problem_path).read_text(encoding="utf-8"))
    except DiagnosticError as exc:
        return exc.diagnostics
    return validate_domain(domain) + validate_problem(problem, domain)


def run_pipeline(model_path, product_path, config: PipelineConfig) -> GenerationReport:
    """Run every stage in order, stopping at the first stage that reports errors.

    Diagnostics in the returned report carry the name of the stage that
    produced them.
    """
    warnings: list[Diagnostic] = []
    stage = "load-model"
    try:
        model = load_model(_read(model_path, stage))
        if config.scope_root is not None:
            stage = "scope"
            model = select_scope(model, config.scope_root)
        stage = "profile"
        found = check_profile(model)
        if has_errors(found):
            raise DiagnosticError(found)
        warnings += [d.with_stage(stage) for d in found]
        stage = "bind-static"
        binding = bind_static(model)
        stage = "bind-actions"
        binding = bind_actions(model, binding)
        stage = "load-product"
        records = load_product_data(_read(product_path, stage), config.key_column)
        stage = "annotate"
        rules = load_rules(_read(config.rules_path, stage)) if config.rules_path else []
        annotations = annotate_product(records, rules, binding)
        stage = "generate-domain"
        domain = generate_domain(binding)
        stage = "generate-problem"
        problem = generate_problem(binding, annotations, config)
        stage = "render"
        report = render(domain, problem, config)
        stage = "verify"
        problems = _verify(report)
        if has_errors(problems):
            raise DiagnosticError(problems)
    except DiagnosticError as exc:
        tagged = [d if d.stage else d.with_stage(stage) for d in exc.diagnostics]
        return GenerationReport(diagnostics=warnings + tagged)
    report.diagnostics = warnings
    return report

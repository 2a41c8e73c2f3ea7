"""Inference, consistency checking and diagnosis over a trace model."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..tracemodel.types import TraceTuple
from ..typecheck import check_model
from .fixpoint import least_fixpoint
from .kernels import get_backend
from .program import Program, premise_codes, run_query, transpose


class ModelTypeError(Exception):
    """The model does not type-check against the signatures; ``issues`` lists why."""

    def __init__(self, issues):
        self.issues = list(issues)
        super().__init__("\n".join(str(i) for i in self.issues))


class StaleViolationError(Exception):
    pass


@dataclass(frozen=True)
class Derivation:
    conclusion: tuple
    rule_id: str
    premises: tuple


@dataclass(frozen=True, order=True)
class Violation:
    constraint_id: str
    binding: tuple  # ((var, location id), ...) in quantifier order
    involved: tuple = field(default=(), compare=False)

    @property
    def binding_map(self):
        return dict(self.binding)

    def __str__(self):
        args = ", ".join(f"{v}={loc}" for v, loc in self.binding)
        return f"{self.constraint_id} at ({args})"


@dataclass(frozen=True)
class Diagnosis:
    violation: Violation
    support: tuple  # TraceTuples from the model, canonical order


@dataclass(frozen=True)
class Inference:
    inferred: tuple
    derivations: dict
    rounds: int
    warnings: tuple = ()

    def __iter__(self):
        # allows ``inferred, derivations = infer(...)``
        return iter((self.inferred, self.derivations))


@dataclass
class AnalysisResult:
    model_name: str
    assigned: tuple
    inferred: tuple
    derivations: dict
    violations: list
    diagnoses: list
    warnings: tuple = ()
    rounds: int = 0

    @property
    def stats(self):
        return {
            "assigned": len(self.assigned),
            "inferred": len(self.inferred),
            "violations": len(self.violations),
        }

    def closure(self):
        return sorted([t.key for t in self.assigned] + [t.key for t in self.inferred])


@dataclass(frozen=True)
class Slice:
    location: str
    tuples: tuple  # closure tuples with the location as an endpoint
    derivations: dict  # every inferred tuple reachable through premise trees
    premises: tuple  # tuples inside those trees that are not incident


class Analyzer:
    """Holds the compiled program for one (model, core, hierarchy) triple."""

    def __init__(self, model, core, h, backend=None, check_types=True):
        if check_types:
            issues = check_model(model, h)
            if issues:
                raise ModelTypeError(issues)
        self.model = model
        self.core = core
        self.h = h
        self.K = get_backend(backend)
        self.prog = Program(model, core, h)
        self.base = sorted(t.key for t in model.base_tuples())
        self.base_by_key = {t.key: t for t in model.base_tuples()}

    # -- inference --------------------------------------------------------------

    def fixpoint(self, keys=None, guard_warnings=True):
        keys = self.base if keys is None else keys
        return least_fixpoint(self.prog, self.prog.adjacency(keys), self.K, guard_warnings)

    def _derivation(self, code, entry):
        rule_idx, prem = entry
        decode = self.prog.decode
        return Derivation(decode(code), self.prog.rules[rule_idx].item.id, tuple(decode(p) for p in prem))

    def infer(self):
        fp = self.fixpoint()
        keys = sorted(self.prog.decode(c) for c in fp.order)
        derivations = {self.prog.decode(c): self._derivation(c, e) for c, e in fp.derivations.items()}
        inferred = tuple(TraceTuple(*k, "inferred") for k in keys)
        return fp, Inference(inferred, derivations, fp.rounds, tuple(fp.warnings))

    # -- consistency ------------------------------------------------------------

    def violations(self, closure):
        prog = self.prog
        closure_t = transpose(closure)
        out = []
        for q in prog.constraints:
            bind = run_query(q, self.K, closure, closure_t)
            if bind.shape[0] == 0:
                continue
            if q.head_kind == "forbid":
                rel, x, y = q.head
                bind = bind[closure[rel, bind[:, x], bind[:, y]]]
            elif q.head_kind == "equal":
                x, y = q.head
                bind = bind[bind[:, x] != bind[:, y]]
            prem = premise_codes(prog, q, bind)
            for row, codes in zip(bind, prem):
                involved = [prog.decode(c) for c in codes]
                if q.head_kind == "forbid":
                    rel, x, y = q.head
                    involved.append((prog.rel_names[rel], prog.loc_ids[row[x]], prog.loc_ids[row[y]]))
                binding = tuple((q.var_names[v], prog.loc_ids[int(row[v])]) for v in q.bound_vars)
                out.append(Violation(q.item.id, binding, tuple(dict.fromkeys(involved))))
        out.sort()
        return out

    def _resolve(self, violation):
        q = self.prog.constraint_by_id.get(violation.constraint_id)
        if q is None:
            raise StaleViolationError(f"no constraint {violation.constraint_id!r} in this spec")
        vid = {name: i for i, name in enumerate(q.var_names)}
        row = np.full(len(q.var_names), -1, dtype=np.int64)
        for var, loc in violation.binding:
            if var not in vid or loc not in self.prog.loc_index:
                raise StaleViolationError(f"binding {var}={loc} does not fit {q.item.id}")
            row[vid[var]] = self.prog.loc_index[loc]
        if set(q.bound_vars) != {vid[v] for v, _ in violation.binding}:
            raise StaleViolationError(f"incomplete binding for {q.item.id}")
        return q, row

    def holds(self, q, row, closure):
        """Whether constraint ``q`` is violated at the fixed binding ``row``."""
        if q.empty:
            return False
        for v in q.bound_vars:
            if not q.var_mask[v, row[v]]:
                return False
        for rel, x, y in q.atoms:
            if not closure[rel, row[x], row[y]]:
                return False
        if q.head_kind == "forbid":
            rel, x, y = q.head
            return bool(closure[rel, row[x], row[y]])
        if q.head_kind == "equal":
            x, y = q.head
            return row[x] != row[y]
        return True

    def _involved_codes(self, q, row):
        codes = [int(self.prog.encode(rel, row[x], row[y])) for rel, x, y in q.atoms]
        if q.head_kind == "forbid":
            rel, x, y = q.head
            codes.append(int(self.prog.encode(rel, row[x], row[y])))
        return codes

    def _leaves(self, fp, roots, base_codes):
        leaves = set()
        stack = list(roots)
        seen = set()
        while stack:
            c = stack.pop()
            if c in seen:
                continue
            seen.add(c)
            if c in base_codes:
                leaves.add(c)
            else:
                stack.extend(fp.derivations[c][1])
        return leaves

    def diagnose(self, violation):
        """Subset-minimal set of base tuples from which ``violation`` still follows.

        Deletion-based: starting from all base tuples, each tuple is tried in
        canonical order and dropped when the violation survives without it.
        A tuple that is not a leaf of the current derivation of the
        violation is dropped without re-running inference, since that
        derivation already witnesses the violation without it.
        """
        q, row = self._resolve(violation)
        prog = self.prog
        current = list(self.base)
        fp = self.fixpoint(current, guard_warnings=False)
        if not self.holds(q, row, fp.closure):
            raise StaleViolationError(f"{violation} does not hold on this model")
        roots = self._involved_codes(q, row)

        def leaves_of(fp, keys):
            return self._leaves(fp, roots, {prog.encode_key(k) for k in keys})

        leaves = leaves_of(fp, current)
        for key in list(self.base):
            trial = [k for k in current if k != key]
            if prog.encode_key(key) not in leaves:
                current = trial
                continue
            fp_trial = self.fixpoint(trial, guard_warnings=False)
            if self.holds(q, row, fp_trial.closure):
                current = trial
                leaves = leaves_of(fp_trial, current)
        return Diagnosis(violation, tuple(self.base_by_key[k] for k in current))

    def violation_holds(self, violation, keys):
        """Re-check one violation instance from the base tuples ``keys``."""
        q, row = self._resolve(violation)
        return self.holds(q, row, self.fixpoint(sorted(keys), guard_warnings=False).closure)

    # -- whole pipeline --------------------------------------------------------

    def analyze(self, with_diagnoses=True):
        fp, inference = self.infer()
        violations = self.violations(fp.closure)
        diagnoses = [self.diagnose(v) for v in violations] if with_diagnoses else []
        assigned = tuple(sorted(self.model.base_tuples(), key=lambda t: t.key))
        return AnalysisResult(
            self.model.name, assigned, inference.inferred, inference.derivations,
            violations, diagnoses, inference.warnings, inference.rounds,
        )


def infer(model, core, h, backend=None):
    """Least fixpoint of the rules over the model's assigned tuples."""
    return Analyzer(model, core, h, backend).infer()[1]


def check_consistency(model, core, h, closure=None, backend=None):
    """Every constraint violation over ``closure`` (default: the inferred closure)."""
    a = Analyzer(model, core, h, backend)
    if closure is None:
        adj = a.fixpoint().closure
    else:
        adj = a.prog.adjacency(closure)
    return a.violations(adj)


def diagnose(model, core, h, violation, derivations=None, backend=None):
    """Subset-minimal assigned-tuple support of one violation.

    ``derivations`` is accepted for interface symmetry; minimisation re-runs
    inference and does not rely on stored derivation trees.
    """
    return Analyzer(model, core, h, backend).diagnose(violation)


def analyze(model, core, h, backend=None):
    return Analyzer(model, core, h, backend).analyze()


def slice_location(result, model, loc_id):
    """Closure tuples touching ``loc_id`` plus the premise trees of the inferred ones."""
    if loc_id not in model.location_ids():
        raise KeyError(loc_id)
    tuples = sorted(
        (t for t in (*result.assigned, *result.inferred) if loc_id in (t.source, t.target)),
        key=lambda t: t.key,
    )
    incident = {t.key for t in tuples}
    derivations = {}
    premises = set()
    stack = [t.key for t in tuples if t.key in result.derivations]
    while stack:
        key = stack.pop()
        if key in derivations:
            continue
        d = result.derivations[key]
        derivations[key] = d
        for p in d.premises:
            if p not in incident:
                premises.add(p)
            if p in result.derivations:
                stack.append(p)
    ordered = {k: derivations[k] for k in sorted(derivations)}
    return Slice(loc_id, tuple(tuples), ordered, tuple(sorted(premises)))

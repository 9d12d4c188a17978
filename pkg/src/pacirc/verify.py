"""Cross-verification suites: every closed form against an independent exact route.

Each check compares one family of closed forms with an oracle that shares
no code with it (state DP, history enumeration, within-sample
enumeration, or stepwise moment propagation). Comparisons are exact
rational equality unless a float tolerance is part of the claim itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import degrees, moments, oracle


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    description: str
    passed: bool
    witness: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "check_id": self.check_id,
            "description": self.description,
            "status": "pass" if self.passed else "fail",
            "witness": self.witness,
        }


def all_passed(results: list[CheckResult]) -> bool:
    return all(r.passed for r in results)


def _result(check_id: str, description: str, failures: list[dict]) -> CheckResult:
    return CheckResult(
        check_id=check_id,
        description=description,
        passed=not failures,
        witness={"failures": failures[:5], "failure_count": len(failures)} if failures else {},
    )


def suite_props(max_m: int = 4, max_n: int = 30, second_max_m: int = 5) -> list[CheckResult]:
    """First and second moments of the color counts against the exact DPs."""
    results = []

    failures = []
    for m in range(1, max_m + 1):
        for n, table in oracle.iter_dp_color_counts(m, max_n):
            mv = moments.mean_y(m, n)
            ey0 = table.mean(0)
            ey1 = table.mean(1) / 2
            if ey0 != mv.ey0 or ey1 != mv.ey1:
                failures.append(
                    {"m": m, "n": n, "dp": [str(ey0), str(ey1)], "formula": [str(mv.ey0), str(mv.ey1)]}
                )
    results.append(
        _result(
            "mean-y-vs-dp",
            f"closed-form mean (Y0, Y1) equals DP means exactly, m <= {max_m}, n <= {max_n}",
            failures,
        )
    )

    failures = []
    var_failures = []
    for m in range(2, second_max_m + 1):
        for n, table in oracle.iter_dp_color_counts(m, max_n):
            if n == 0:
                continue
            sm = moments.second_moments(m, n)
            ew2 = table.expectation(lambda o: o[0] * o[0])
            ewb = table.expectation(lambda o: o[0] * o[1])
            eb2 = table.expectation(lambda o: o[1] * o[1])
            if (ew2, ewb, eb2) != (sm.ew2, sm.ewb, sm.eb2):
                failures.append(
                    {
                        "m": m,
                        "n": n,
                        "dp": [str(ew2), str(ewb), str(eb2)],
                        "formula": [str(sm.ew2), str(sm.ewb), str(sm.eb2)],
                    }
                )
            mv = moments.mean_y(m, n)
            if sm.ew2 - mv.ey0**2 < 0 or sm.eb2 - (2 * mv.ey1) ** 2 < 0:
                var_failures.append({"m": m, "n": n})
    results.append(
        _result(
            "second-moments-vs-dp",
            f"closed-form E[W^2], E[WB], E[B^2] equal DP moments exactly, "
            f"2 <= m <= {second_max_m}, n <= {max_n}",
            failures,
        )
    )
    results.append(
        _result("variance-nonnegative", "closed-form variances are nonnegative", var_failures)
    )

    failures = []
    refusal_failures = []
    for m in range(1, min(max_m, 3) + 1):
        reachable = dict(oracle.iter_dp_color_counts(m, min(max_n, 4) - 1))
        for n in range(1, min(max_n, 4) + 1):
            states = reachable[n - 1].support()
            if (m + 1) * n <= 4:
                for w, b in states:
                    try:
                        moments.cond_step_moments(m, n, w, b)
                        refusal_failures.append({"m": m, "n": n, "state": [w, b]})
                    except moments.FormulaDomainError:
                        pass
                continue
            for w, b in states:
                law = oracle.enumerate_sample_step(m, n, w, b)
                sm = moments.cond_step_moments(m, n, w, b)
                got = (
                    law.mean(0),
                    law.mean(1),
                    law.expectation(lambda o: o[0] * o[0]),
                    law.expectation(lambda o: o[0] * o[1]),
                    law.expectation(lambda o: o[1] * o[1]),
                )
                want = (sm.ew, sm.eb, sm.ew2, sm.ewb, sm.eb2)
                if got != want:
                    failures.append(
                        {
                            "m": m,
                            "n": n,
                            "state": [w, b],
                            "enumeration": [str(x) for x in got],
                            "formula": [str(x) for x in want],
                        }
                    )
    results.append(
        _result(
            "cond-step-vs-enumeration",
            "conditional within-sample moments equal the sample-step enumeration exactly "
            "on all reachable states, m <= 3, n <= 4",
            failures,
        )
    )
    results.append(
        _result(
            "cond-step-refusal",
            "sizes with vanishing denominators are refused and deferred to the oracle",
            refusal_failures,
        )
    )

    failures = []
    for m in range(1, min(max_m, 3) + 1):
        for n, table in oracle.iter_dp_color_counts(m, min(max_n, 8)):
            rec = oracle.recurrence_moments(m, n)
            got = (
                table.mean(0),
                table.mean(1),
                table.expectation(lambda o: o[0] * o[0]),
                table.expectation(lambda o: o[0] * o[1]),
                table.expectation(lambda o: o[1] * o[1]),
            )
            if got != (rec.ew, rec.eb, rec.ew2, rec.ewb, rec.eb2):
                failures.append({"m": m, "n": n})
    results.append(
        _result(
            "recurrence-moments-vs-dp",
            "stepwise moment propagation equals DP moments exactly, m <= 3, n <= 8",
            failures,
        )
    )

    return results


def suite_degree(max_m: int = 3, max_n: int = 6, port_max_n: int = 8) -> list[CheckResult]:
    """Degree distribution and moments against the degree DP."""
    results = []

    pmf_failures = []
    moment_failures = []
    support_failures = []
    for m in range(1, max_m + 1):
        for n in range(0, max_n + 1):
            for j in range(0, n + 1):
                pmf = degrees.degree_pmf(m, j, n)
                dp = oracle.dp_degree(m, j, n)
                if pmf != dp:
                    pmf_failures.append({"m": m, "j": j, "n": n})
                    continue
                rep = degrees.degree_moments(m, j, n)
                if rep.mean != pmf.mean() or rep.variance != pmf.variance():
                    moment_failures.append(
                        {
                            "m": m,
                            "j": j,
                            "n": n,
                            "pmf": [str(pmf.mean()), str(pmf.variance())],
                            "formula": [str(rep.mean), str(rep.variance)],
                        }
                    )
                indeg = m if j > 0 else 0
                # once n > j the root has caught the whole first sample, so its
                # degree is at least m too, despite having no indegree
                lo = m if n > j else indeg
                hi = indeg + m * (n - j)
                support = pmf.support()
                if min(support) != lo or max(support) != hi:
                    support_failures.append({"m": m, "j": j, "n": n, "support": support})
    results.append(
        _result(
            "degree-pmf-vs-dp",
            f"composition-sum degree law equals the degree DP exactly, m <= {max_m}, n <= {max_n}",
            pmf_failures,
        )
    )
    results.append(
        _result(
            "degree-moments-vs-pmf",
            "closed-form degree mean/variance equal the exact law moments",
            moment_failures,
        )
    )
    results.append(
        _result(
            "degree-support-endpoints",
            "degree law is supported on [indegree, indegree + m (n - j)] with positive endpoints",
            support_failures,
        )
    )

    failures = []
    for n in range(0, port_max_n + 1):
        if degrees.port_root_pmf(n) != degrees.degree_pmf(1, 0, n):
            failures.append({"n": n})
    results.append(
        _result(
            "port-root-pmf",
            f"simplified m = 1 root-degree product form equals the general law, n <= {port_max_n}",
            failures,
        )
    )

    return results


def suite_martingale(
    ms: tuple[int, ...] = (2, 3), n_max: int = 5, tol: float = 1e-9
) -> list[CheckResult]:
    """The martingale property of the transformed color counts, state by state."""
    results = []
    step_failures = []
    recursion_failures = []
    worst = 0.0
    for m in ms:
        mats = {n: moments.martingale_matrices(m, n) for n in range(1, n_max + 1)}
        reachable = dict(oracle.iter_dp_color_counts(m, n_max - 1))
        for n in range(2, n_max + 1):
            cur, prev = mats[n], mats[n - 1]
            # defining recursions, exact
            a = cur.a
            prod = (
                (
                    cur.p[0][0] * a[0][0] + cur.p[0][1] * a[1][0],
                    cur.p[0][0] * a[0][1] + cur.p[0][1] * a[1][1],
                ),
                (
                    cur.p[1][0] * a[0][0] + cur.p[1][1] * a[1][0],
                    cur.p[1][0] * a[0][1] + cur.p[1][1] * a[1][1],
                ),
            )
            q_ok = (
                cur.q[0] == prev.q[0] - cur.p[0][0]
                and cur.q[1] == prev.q[1] - cur.p[1][0]
            )
            if prod != prev.p or not q_ok:
                recursion_failures.append({"m": m, "n": n})
            for w, b in reachable[n - 1].support():
                law = oracle.enumerate_sample_step(m, n, w, b)
                ew_next = law.mean(0) + 1  # hiccup white node
                eb_next = law.mean(1)
                lhs = cur.m_value(ew_next, eb_next)
                rhs = prev.m_value(w, b)
                diff = max(abs(float(lhs[0] - rhs[0])), abs(float(lhs[1] - rhs[1])))
                worst = max(worst, diff)
                if diff >= tol:
                    step_failures.append(
                        {"m": m, "n": n, "state": [w, b], "diff": diff}
                    )
    results.append(
        _result(
            "martingale-recursions",
            "p_n a_n = p_{n-1} and q_n = q_{n-1} - p_n e1, exactly",
            recursion_failures,
        )
    )
    res = _result(
        "martingale-step",
        f"E[M_n | state] = M_(n-1) on all reachable states, m in {list(ms)}, n <= {n_max}",
        step_failures,
    )
    results.append(
        CheckResult(
            res.check_id,
            res.description,
            res.passed,
            {**res.witness, "worst_abs_diff": worst},
        )
    )
    return results


def suite_cov_limit(
    ms: tuple[int, ...] = (2, 3), n: int = 5000, rel_tol: float = 0.02
) -> list[CheckResult]:
    """Convergence of the exact finite-n covariance over n to the limit matrix."""
    failures = []
    observed = {}
    for m in ms:
        rec = oracle.recurrence_moments(m, n)
        var_y0, cov_01, var_y1 = rec.cov_y()
        limit = moments.cov_limit(m)
        pairs = [
            ("var_y0", var_y0 / n, limit.var_y0),
            ("cov_y0_y1", cov_01 / n, limit.cov_y0_y1),
            ("var_y1", var_y1 / n, limit.var_y1),
        ]
        errs = {}
        for name, got, want in pairs:
            rel = abs(float((got - want) / want))
            errs[name] = rel
            if rel > rel_tol:
                failures.append({"m": m, "entry": name, "rel_err": rel})
        observed[str(m)] = errs
    res = _result(
        "cov-limit-convergence",
        f"(1/n) x exact covariance of (Y0, Y1) at n = {n} is within {rel_tol:.0%} of the limit",
        failures,
    )
    return [CheckResult(res.check_id, res.description, res.passed, {**res.witness, "rel_errs": observed})]


def run_suite(
    suite: str,
    max_m: int | None = None,
    max_n: int | None = None,
) -> list[CheckResult]:
    """Run one named suite (or ``all``) with optional grid overrides."""
    if suite == "props":
        kwargs = {}
        if max_m is not None:
            kwargs["max_m"] = max_m
            kwargs["second_max_m"] = max(2, max_m)
        if max_n is not None:
            kwargs["max_n"] = max_n
        return suite_props(**kwargs)
    if suite == "degree":
        kwargs = {}
        if max_m is not None:
            kwargs["max_m"] = max_m
        if max_n is not None:
            kwargs["max_n"] = max_n
        return suite_degree(**kwargs)
    if suite == "martingale":
        kwargs = {}
        if max_m is not None:
            kwargs["ms"] = tuple(range(2, max(2, max_m) + 1))
        if max_n is not None:
            kwargs["n_max"] = max(2, max_n)
        return suite_martingale(**kwargs)
    if suite == "all":
        return (
            run_suite("props", max_m, max_n)
            + run_suite("degree", max_m, min(max_n, 6) if max_n is not None else None)
            + run_suite("martingale", max_m, min(max_n, 5) if max_n is not None else None)
            + suite_cov_limit()
        )
    raise ValueError(f"unknown suite {suite!r}")

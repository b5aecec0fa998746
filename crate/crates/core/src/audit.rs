//! Re-checks the intermediate claims recorded in a [`Trace`] with the exact
//! oracle. Steps whose region exceeds the oracle cap are counted as skipped.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::model::{GoodsGraph, VertexSet};
use crate::oracle::{mms_in, OracleConfig};
use crate::scalar::{total, Scalar};
use crate::split;
use crate::trace::{MergeStep, Step, Trace};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AuditReport {
    /// Checks performed, by name.
    pub checked: BTreeMap<&'static str, usize>,
    pub skipped: usize,
    pub violations: Vec<String>,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, name: &str) -> usize {
        self.checked.get(name).copied().unwrap_or(0)
    }

    fn tick(&mut self, name: &'static str, ok: bool, msg: impl FnOnce() -> String) {
        *self.checked.entry(name).or_insert(0) += 1;
        if !ok {
            self.violations.push(format!("{name}: {}", msg()));
        }
    }

    pub fn absorb(&mut self, other: AuditReport) {
        for (k, v) in other.checked {
            *self.checked.entry(k).or_insert(0) += v;
        }
        self.skipped += other.skipped;
        self.violations.extend(other.violations);
    }
}

/// Values of `set` under `utility`, largest first.
fn sorted_values<S: Scalar>(utility: &[S], set: &VertexSet) -> Vec<S> {
    let mut v: Vec<S> = set.iter().map(|&w| utility[w].clone()).collect();
    v.sort_by(|a, b| b.partial_cmp(a).expect("utilities are comparable"));
    v
}

/// `u(w_j) >= u(v_{2j})` for every `j`, where `w` and `v` list `after` and
/// `before` by decreasing value and missing entries count as zero.
pub fn dominates<S: Scalar>(utility: &[S], before: &VertexSet, after: &VertexSet) -> bool {
    let w = sorted_values(utility, after);
    let v = sorted_values(utility, before);
    (1..=v.len() / 2).all(|j| w.get(j - 1).cloned().unwrap_or_else(S::zero) >= v[2 * j - 1])
}

fn check_merge<S: Scalar>(report: &mut AuditReport, merge: &MergeStep<S>, utilities: &[Vec<S>]) {
    for b in &merge.bundles {
        let u = &utilities[merge.types.start + b.packing];
        report.tick("merge_domination", dominates(u, &b.before, &b.after), || {
            format!("bundle {:?} -> {:?} at level {}", b.before, b.after, merge.level)
        });
        let top = sorted_values(u, &b.before).first().cloned().unwrap_or_else(S::zero);
        let half = (total(u, &b.before) - top) / S::from_count(2);
        report.tick("merge_halving", total(u, &b.after) >= half, || {
            format!("bundle {:?} -> {:?} lost more than half", b.before, b.after)
        });
    }
}

pub fn audit_trace<S: Scalar>(graph: &GoodsGraph, trace: &Trace<S>, config: &OracleConfig) -> AuditReport {
    let mut report = AuditReport::default();
    let mut pending: Vec<&MergeStep<S>> = Vec::new();
    let share = |report: &mut AuditReport, region: &VertexSet, u: &[S], n: usize| -> Option<S> {
        match mms_in(graph, region, u, n, config) {
            Ok((v, _)) => Some(v),
            Err(Error::SizeLimit { .. }) => {
                report.skipped += 1;
                None
            }
            Err(e) => {
                report.violations.push(format!("oracle failed on an audited region: {e}"));
                None
            }
        }
    };
    for step in &trace.steps {
        match step {
            Step::Reduction(r) => {
                report.tick("reduction_k_sum", r.k_sum() == r.residual, || {
                    format!("k_j add up to {} for {} residual agents", r.k_sum(), r.residual)
                });
            }
            Step::BlockBase { ratio, .. } => {
                report.tick("block_base_ratio", *ratio >= S::fraction(1, 2), || format!("ratio {ratio}"));
            }
            Step::BlockContract { region_after, claims, .. } => {
                for c in claims {
                    if let Some(m) = share(&mut report, region_after, &c.utility, claims.len()) {
                        report.tick("contract_share", m >= c.target, || {
                            format!("agent {} keeps share {m} below target {}", c.agent, c.target)
                        });
                    }
                }
            }
            Step::BlockCarve { region_after, remaining, .. } => {
                for c in remaining {
                    if let Some(m) = share(&mut report, region_after, &c.utility, remaining.len()) {
                        report.tick("carve_share", m >= c.target, || {
                            format!("agent {} keeps share {m} below target {}", c.agent, c.target)
                        });
                    }
                }
            }
            Step::Multipartite(m) => {
                let n = m.n;
                report.tick("mp_size", m.region.len() >= 5 * n, || format!("{} vertices, n = {n}", m.region.len()));
                report.tick("mp_ell", m.ell < m.parts.len(), || format!("ell {} of {} parts", m.ell, m.parts.len()));
                report.tick("mp_sides", m.v1.len() >= n && m.v2.len() >= n, || {
                    format!("sides {} and {}", m.v1.len(), m.v2.len())
                });
                report.tick("mp_served", m.carved.len() == n, || format!("{} of {n} carved", m.carved.len()));
                report.tick("mp_spares", m.spares.len() == n, || format!("{} spares for {n}", m.spares.len()));
            }
            Step::Merge(m) => pending.push(m),
            Step::Kernel(k) => {
                let utilities: Vec<Vec<S>> = k.types.iter().map(|t| t.utility.clone()).collect();
                for m in pending.drain(..) {
                    check_merge(&mut report, m, &utilities);
                }
                let level = k.types.len().trailing_zeros() as usize;
                let beta_top: S = split::beta(level, level);
                for (p, t) in k.types.iter().enumerate() {
                    for bundle in &t.packing {
                        let inside: VertexSet = bundle.intersection(&k.kernel).copied().collect();
                        report.tick(
                            "kernel_preservation",
                            total(&t.folded, &inside) == total(&t.utility, bundle),
                            || format!("type {p}, bundle {bundle:?}"),
                        );
                    }
                    report.tick("kernel_lift", t.kernel_mms >= beta_top.clone() * t.target.clone(), || {
                        format!("type {p}: kernel share {} for target {}", t.kernel_mms, t.target)
                    });
                    if let Some(m) = share(&mut report, &k.kernel, &t.folded, t.packing.len()) {
                        report.tick("kernel_share_recomputed", m == t.kernel_mms, || {
                            format!("type {p}: recorded {} but the oracle gives {m}", t.kernel_mms)
                        });
                    }
                }
                report.tick("kernel_ratio", k.ratio >= S::fraction(3, 4), || format!("ratio {}", k.ratio));
            }
        }
    }
    if !pending.is_empty() {
        report.violations.push(format!("{} merges without a kernel step", pending.len()));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Value;

    fn q(n: i64) -> Value {
        Value::from_integer(n.into())
    }

    #[test]
    fn domination_on_a_halved_bundle() {
        let u = vec![q(5), q(4), q(3), q(2)];
        let before = VertexSet::from([0, 1, 2, 3]);
        assert!(dominates(&u, &before, &VertexSet::from([1, 3])));
        assert!(!dominates(&u, &before, &VertexSet::from([3])));
        assert!(dominates(&u, &VertexSet::from([0]), &VertexSet::new()));
    }
}

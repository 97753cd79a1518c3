// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! The Liquidationist: every inherited blossom is liquidated, small ones
//! are repaired by local searches, and tau SearchOne rounds finish the
//! scale.

use crate::eligibility::Criterion;
use crate::error::{violation, SolveResult};
use crate::graph::{Graph, VertexId};
use crate::queue::QueueKind;
use crate::report::ScaleReport;
use crate::scaling::{default_tau_liquidationist, Ctx, Options, Solution};
use crate::search_one::search_one;

pub fn run_liquidationist(g: &Graph, opts: &Options) -> SolveResult<Solution> {
    let tau = opts.tau.unwrap_or_else(|| default_tau_liquidationist(g.n())).max(1);
    let ctx = Ctx::new(g.clone(), opts.clone(), tau, "liquidationist");
    ctx.solve_with(liquidationist_scale)
}

fn liquidationist_scale(ctx: &mut Ctx, rep: &mut ScaleReport) -> SolveResult<()> {
    ctx.liquidate_large(rep);
    ctx.reweight()?;
    let mut small: Vec<Vec<VertexId>> = ctx
        .st
        .old
        .alive_roots()
        .into_iter()
        .map(|id| ctx.st.old.nodes[id].members.clone())
        .collect();
    small.sort_by_key(|m| m.len());
    let alive: Vec<usize> = ctx.st.old.alive().collect();
    for id in alive {
        if ctx.st.old.nodes[id].alive {
            ctx.st.liquidate_old(id);
        }
    }
    for members in &small {
        repair_small(ctx, members, rep)?;
    }
    for _ in 0..ctx.tau {
        let out = search_one(&mut ctx.st, ctx.opts.check)?;
        rep.search_one_calls += 1;
        rep.exhaustive_checks += out.exhaustive_checks;
        if out.adjusted {
            rep.dual_adjustments += 1;
        }
    }
    ctx.record_reduction(rep);
    let want = if ctx.opts.check { Some(ctx.tau as i64) } else { None };
    ctx.perfection(rep, want)
}

/// Lowers the free duals inside a former small blossom to zero, matching
/// what can be matched along the way.
fn repair_small(ctx: &mut Ctx, members: &[VertexId], rep: &mut ScaleReport) -> SolveResult<()> {
    loop {
        let mut ys: Vec<i64> = members
            .iter()
            .filter(|&&v| !ctx.st.mate.is_matched(v))
            .map(|&v| ctx.st.y[v])
            .collect();
        ys.sort_unstable();
        ys.dedup();
        let top = match ys.last() {
            Some(&t) if t > 0 => t,
            _ => break,
        };
        let next = if ys.len() >= 2 { ys[ys.len() - 2].max(0) } else { 0 };
        let roots: Vec<VertexId> = members
            .iter()
            .copied()
            .filter(|&v| !ctx.st.mate.is_matched(v) && ctx.st.y[v] == top)
            .collect();
        let mut p = ctx.params(&roots, Criterion::One);
        p.scope = Some(members);
        p.budget = Some(top - next);
        p.queue = QueueKind::Bucket;
        p.idle_to_budget = true;
        p.process_at_budget = true;
        let out = ctx.eng.run(&mut ctx.st, &p)?;
        rep.search_calls += 1;
        rep.dual_adjustments += out.adjustments;
        rep.shadow_checks += out.shadow_checks;
        if out.adjustments == 0 && !out.augmented() {
            return violation(format!("local search in a {}-vertex blossom made no progress", members.len()));
        }
    }
    if ctx.opts.check {
        let mut inside = vec![false; ctx.st.g.vertex_capacity()];
        for &v in members {
            inside[v] = true;
        }
        for &v in members {
            for &e in ctx.st.g.adj(v) {
                let ed = ctx.st.g.edge(e);
                if inside[ed.u] != inside[ed.v] && ctx.st.g.edge_active(e) && ctx.st.yz(e) < ctx.st.w[e] {
                    return violation(format!("edge {} leaving a repaired blossom is not dominated", e));
                }
            }
        }
    }
    Ok(())
}

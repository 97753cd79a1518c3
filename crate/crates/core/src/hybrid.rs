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

//! The hybrid driver: small inherited blossoms are dismantled in place,
//! then SearchOne rounds and bounded bucket searches reduce the free set.

use crate::eligibility::Criterion;
use crate::engine::Halt;
use crate::error::SolveResult;
use crate::gabow::gabow_dissolve;
use crate::graph::{Graph, VertexId};
use crate::queue::QueueKind;
use crate::report::ScaleReport;
use crate::scaling::{ceil_sqrt, default_tau_hybrid, Ctx, Options, Solution};
use crate::search_one::search_one;

pub fn run_hybrid(g: &Graph, opts: &Options) -> SolveResult<Solution> {
    let tau = opts.tau.unwrap_or_else(|| default_tau_hybrid(g.n())).max(1);
    let ctx = Ctx::new(g.clone(), opts.clone(), tau, "hybrid");
    ctx.solve_with(hybrid_scale)
}

fn hybrid_scale(ctx: &mut Ctx, rep: &mut ScaleReport) -> SolveResult<()> {
    ctx.liquidate_large(rep);
    ctx.reweight()?;
    for b in ctx.st.old.alive_roots() {
        gabow_dissolve(ctx, b, rep)?;
    }
    let mut delta = 0i64;
    for _ in 0..ceil_sqrt(ctx.n).max(1) {
        let out = search_one(&mut ctx.st, ctx.opts.check)?;
        rep.search_one_calls += 1;
        rep.exhaustive_checks += out.exhaustive_checks;
        if out.adjusted {
            delta += 1;
        }
    }
    rep.dual_adjustments += delta;
    while delta < ctx.tau as i64 && ctx.st.free_count() > 0 {
        let roots: Vec<VertexId> = ctx.st.free_vertices();
        let mut p = ctx.params(&roots, Criterion::Three);
        p.budget = Some(ctx.tau as i64 - delta);
        p.queue = QueueKind::Bucket;
        p.exhaust = true;
        let out = ctx.eng.run(&mut ctx.st, &p)?;
        rep.search_calls += 1;
        rep.dual_adjustments += out.adjustments;
        rep.shadow_checks += out.shadow_checks;
        delta += out.adjustments;
        if out.halt == Some(Halt::Empty) || (out.adjustments == 0 && !out.augmented()) {
            break;
        }
    }
    ctx.record_reduction(rep);
    ctx.perfection(rep, None)
}

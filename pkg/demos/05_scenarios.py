"""Worked scenarios: traces, cusps and Hajlasz spaces."""

# %%
from sobembed import run_scenario

print(run_scenario("lipschitz-trace", {"n": 3, "p": 2}).to_text())
print(run_scenario("koch-trace", {"p": 1.5, "alpha": 0.0}).to_text())

# %% the cusp scenario with weights x_n^(-n gamma): the chunk covering gives boundedness for p <= q
rep = run_scenario("cusp", {"n": 2, "gamma": 2.0, "p": 2, "q": 2})
print(rep.to_text())

# %% below q = p (gamma - 1)/(p + gamma - 1) the power x_n^((gamma-1)/q) defeats the embedding
for q in (1.2, 1.5):
    rep = run_scenario("cusp", {"n": 2, "gamma": 5.0, "p": 2, "q": q, "kmax": 3})
    print(q, rep.quantities["counterexample_fails_embedding"])

# %%
print(run_scenario("hajlasz-general-measure").to_text())

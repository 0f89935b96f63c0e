#!/usr/bin/env python3
"""Regenerate the number-field data under data/ using PARI/GP through cypari2.

Produces
  data/corpus/deg{2,3}.jsonl          base-field records (odd disc, h+ = 1, rd <= 9.5)
  data/fields/*.json                  named records used by tests and examples
  data/packs/<label>.pack.json        extension records (Kummer M, witness fields, N)
  data/fixtures/rayclass/*.json       ray class invariant factors from bnrinit
  data/fixtures/reference/*.json      independent classification results
  data/fixtures/MANIFEST.sha256
  data/cache/lmfdb/<key>/page_*.json  LMFDB-shaped pages for offline fetch

PARI class groups are GRH-conditional (bnfinit default), as are the LMFDB ones.
"""
import argparse
import hashlib
import json
import os
import sys

import cypari2

pari = cypari2.Pari()
pari.allocatemem(4 * 10**9)

GP = r"""
ones(b)=vector(b.r1,i,1);
rcz(b,m,inf)=bnrinit(b,[m,if(inf,ones(b),vector(b.r1,i,0))],1);
rc(b,m)=rcz(b,m,1);
Pmod(b)=my(L=idealprimedec(b,2));idealfactorback(b,L,vector(#L,i,2));
hplus(b)=bnrinit(b,[1,ones(b)]).no;
two_part(c)=prod(i=1,#c,2^valuation(c[i],2));
{qdim(R,vs)=my(c=R.cyc,idx=[i|i<-[1..#c],c[i]%2==0],M);
  if(!#idx,return(0));
  if(!#vs,return(#idx));
  M=matrix(#idx,#vs,i,j,vs[j][idx[i]]);
  #idx-matrank(Mod(M,2));}
cfact(b,L)=idealdiv(b,2,L);
{kummer_gens(b)=concat([b.tu[2]],b.fu);}
"""

def _load_gp():
    import tempfile
    with tempfile.NamedTemporaryFile("w", suffix=".gp", delete=False) as fh:
        fh.write(GP)
    pari(f'read("{fh.name}")')
    os.remove(fh.name)


_load_gp()


def gp(name):
    return pari(name)


def ints(v):
    return [str(c) for c in v]


def nf_degree(b):
    return int(pari("(b)->poldegree(b.pol)")(b))


def record(b, label, with_generator=True):
    n = nf_degree(b)
    pol = pari("(b)->b.pol")(b)
    zk = pari("(b)->b.zk")(b)
    basis = [[str(pari.polcoef(z, i, "y")) for i in range(n)] for z in zk]
    sig = pari("(b)->b.sign")(b)
    h = int(pari("(b)->b.no")(b))
    tu = pari("(b)->b.tu")(b)
    fu = pari("(b)->b.fu")(b)
    rec = {
        "schema": "fontaine.field/1",
        "label": label,
        "degree": n,
        "poly": [str(pari.polcoef(pol, i, "y")) for i in range(n + 1)],
        "integral_basis": basis,
        "disc": str(pari("(b)->b.disc")(b)),
        "signature": [int(sig[0]), int(sig[1])],
        "h": h,
        "h_plus": int(gp("hplus")(b)),
        "units": [ints(pari.nfalgtobasis(b, u)) for u in fu],
        "torsion": {"order": int(tu[0]), "generator": ints(pari.nfalgtobasis(b, tu[1]))},
    }
    fac = []
    two = ints(pari.nfalgtobasis(b, 2))
    for pr in pari.idealprimedec(b, 2):
        ent = {
            "two_generators": [two, ints(pari("(p)->p.gen[2]")(pr))],
            "e": int(pari("(p)->p.e")(pr)),
            "f": int(pari("(p)->p.f")(pr)),
        }
        if with_generator and h == 1:
            ent["generator"] = ints(pari.bnfisprincipal(b, pr)[1])
        fac.append(ent)
    rec["two_factorization"] = fac
    return rec


def bnf_x(pol):
    return pari.bnfinit(pari.subst(pari(pol), "x", "y"), 1)


def lmfdb_label(n, r1, absd, idx):
    return f"{n}.{r1}.{absd}.{idx}"


# ---------------------------------------------------------------- corpora

def quadratic_polys():
    out = []
    for d in range(-90, 91):
        if d in (0, 1) or not pari.isfundamental(d):
            continue
        out.append(str(pari.polredabs(pari.quadpoly(d))))
    return out


def cubic_polys():
    seen = set()
    for grp in ("C3", "S3"):
        for s in (0, 1):
            for p in pari(f'nflist("{grp}",[1,857],{s})'):
                seen.add(str(pari.polredabs(p)))
    return sorted(seen)


def build_fields(polys):
    """All fields with h+ = 1 (any disc parity), sorted as LMFDB does, with labels."""
    items = []
    for p in polys:
        b = bnf_x(p)
        if int(gp("hplus")(b)) != 1:
            continue
        d = int(pari("(b)->b.disc")(b))
        r1 = int(pari("(b)->b.r1")(b))
        items.append((abs(d), r1, p, b))
    items.sort(key=lambda t: (t[0], t[1], t[2]))
    counter = {}
    out = []
    for absd, r1, p, b in items:
        n = nf_degree(b)
        key = (n, r1, absd)
        counter[key] = counter.get(key, 0) + 1
        out.append((lmfdb_label(n, r1, absd, counter[key]), p, b))
    return out


# ---------------------------------------------------------- classification

def hnf_key(b, pr):
    m = pari.idealhnf(b, pr)
    n = nf_degree(b)
    return tuple(int(m[j][i]) for i in range(n) for j in range(n))


def canonical_order(b, prs):
    idx = list(range(len(prs)))
    idx.sort(key=lambda i: (int(pari("(p)->p.f")(prs[i])), hnf_key(b, prs[i])))
    return idx


def ideal_from_exps(b, prs, exps):
    return pari.idealfactorback(b, pari.Vec(prs), pari.Vec(exps))


def witness(b, prs, i):
    c = gp("cfact")(b, prs[i])
    R = gp("rc")(b, pari.idealpow(b, c, 2))
    dim = int(gp("qdim")(R, pari("[]")))
    deg = 2**dim
    inert = None
    if deg == 2:
        v = pari.bnrisprincipal(R, prs[i], 0)
        inert = int(gp("qdim")(R, pari.Vec([v]))) == 0
    return deg, inert, R


def is_two_power(n):
    return n > 0 and n & (n - 1) == 0


def tower_levels(b, rho, cap):
    levels = []
    for k in range(1, cap + 1):
        R = gp("rc")(b, pari.idealpow(b, rho, k))
        levels.append(int(gp("two_part")(pari("(R)->R.cyc")(R))))
    return levels


def tower_status(levels, sum_d, unit_rank):
    if sum_d > unit_rank:
        return {"status": "Infinite"}
    # levels[k] is the level for exponent k+1
    for m in range(2, len(levels)):
        if levels[m] == levels[m - 1]:
            return {"status": "Finite", "level": m}
    return {"status": "Inconclusive"}


def quotient_dim(b, modulus, split_prs):
    R = gp("rc")(b, modulus)
    vs = [pari.bnrisprincipal(R, p, 0) for p in split_prs]
    return int(gp("qdim")(R, pari.Vec(vs) if vs else pari("[]")))


def load_odlyzko(path):
    rows = []
    with open(path) as fh:
        next(fh)
        for line in fh:
            n, v = line.strip().split(",")
            rows.append((int(n), float(v)))
    return rows


def odlyzko_lookup(rows, x):
    for n, v in rows:
        if v > x:
            return n - 1
    return None


class Generator:
    def __init__(self, root, cap, odl_rows):
        self.root = root
        self.cap = cap
        self.odl = odl_rows
        h = hashlib.sha256(open(os.path.abspath(__file__), "rb").read()).hexdigest()[:16]
        self.prov = f"pari:{pari.version()[0]}.{pari.version()[1]}.{pari.version()[2]}:gen_fixtures:{h}"
        self.ext_cache = {}

    def ext_record(self, pol, label):
        if pol not in self.ext_cache:
            b = bnf_x(pol)
            self.ext_cache[pol] = record(b, label, with_generator=False)
        r = dict(self.ext_cache[pol])
        r["label"] = label
        return r

    def kummer_fields(self, b):
        gens = gp("kummer_gens")(b)
        k = len(gens)
        out = []
        for mask in range(1, 2**k):
            bits = "".join("1" if (mask >> i) & 1 else "0" for i in range(k))
            u = pari(1)
            for i in range(k):
                if (mask >> i) & 1:
                    u = u * gens[i]
            rel = pari("x^2") - pari.lift(u)
            pol = str(pari.polredbest(pari.rnfequation(b, rel)))
            out.append((bits, pol))
        return out

    def classify(self, label, b):
        """Reference run of the decision procedure; returns (outcome, pack extensions)."""
        n = nf_degree(b)
        r1 = int(pari("(b)->b.r1")(b))
        r2 = int(pari("(b)->b.r2")(b))
        d = int(pari("(b)->b.disc")(b))
        prs = list(pari.idealprimedec(b, 2))
        t = len(prs)
        out = {"label": label, "degree": n, "t": t}
        exts = []
        if d % 2 == 0:
            out["stage"] = "hypothesis"
            return out, exts
        if t > 3:
            out["stage"] = "rejected"
            out["step"] = 1
            out["reason"] = "too_many_primes"
            return out, exts
        RK = gp("rc")(b, gp("Pmod")(b))
        out["R_K"] = [int(c) for c in pari("(R)->R.cyc")(RK)]
        if not is_two_power(int(pari("(R)->R.no")(RK))):
            out["stage"] = "rejected"
            out["step"] = 1
            out["reason"] = "R_K_not_2group"
            return out, exts
        order = canonical_order(b, prs)
        out["canonical_order"] = order
        W = {}
        for i in range(t):
            deg, inert, _ = witness(b, prs, i)
            W[i] = (deg, inert)
        out["witness"] = [{"index": i, "degree": W[i][0], "inert": W[i][1]} for i in range(t)]
        d1 = [i for i in order if W[i][0] == 1]
        d2 = [] if d1 else [i for i in order if W[i][0] == 2 and W[i][1]]
        if d1:
            kind, p = 1, d1[0]
        elif d2:
            kind, p = 2, d2[0]
        else:
            out["stage"] = "rejected"
            out["step"] = 2
            out["reason"] = "no_dichotomy"
            return out, exts
        out["dichotomy"] = "D1" if kind == 1 else "D2"
        out["witness_prime"] = p
        L1 = n * 2 ** (r1 + r2)
        out["L1"] = L1
        ms = self.kummer_fields(b)
        m_ok = True
        m_info = []
        for bits, pol in ms:
            rec = self.ext_record(pol, f"{label}/kummer:{bits}")
            exts.append({"descriptor": f"kummer:{bits}", "kind": "kummer", "record": rec,
                         "provenance": self.prov})
            bm = bnf_x(pol)
            ordm = int(pari("(R)->R.no")(gp("rc")(bm, gp("Pmod")(bm))))
            m_info.append({"descriptor": f"kummer:{bits}", "R_M_order": ordm})
            if not is_two_power(ordm):
                m_ok = False
        out["M"] = m_info
        if not m_ok:
            out["stage"] = "rejected"
            out["step"] = 3 if kind == 1 else 4
            out["reason"] = "R_M_not_2group"
            return out, exts
        if kind == 1:
            out["L2"] = L1
            out["solvable"] = True
            return self.finish(out, b, n, d), exts
        # D2: witness fields for every eligible prime
        wdata = {}
        for i in d2:
            c = gp("cfact")(b, prs[i])
            R = gp("rc")(b, pari.idealpow(b, c, 2))
            relpol = pari.bnrclassfield(R, 2)[0]
            kp = str(pari.polredbest(pari.rnfequation(b, relpol)))
            rec = self.ext_record(kp, f"{label}/witness:{i + 1}")
            exts.append({"descriptor": f"witness:{i + 1}", "kind": "witness", "record": rec,
                         "provenance": self.prov})
            bk = bnf_x(kp)
            Rk = gp("rc")(bk, gp("Pmod")(bk))
            rk_order = int(pari("(R)->R.no")(Rk))
            L2 = 2 * n * rk_order
            solv = L2 == L1
            nlist = []
            if L2 > L1:
                subs = pari.subgrouplist(pari("(R)->R.cyc")(Rk), pari("[2]"))
                good = True
                for k, H in enumerate(subs):
                    npol = str(pari.polredbest(pari.rnfequation(bk, pari.bnrclassfield(Rk, H)[0])))
                    nrec = self.ext_record(npol, f"{label}/N:{i + 1}:{k + 1}")
                    exts.append({"descriptor": f"N:{i + 1}:{k + 1}", "kind": "N", "record": nrec,
                                 "provenance": self.prov})
                    bn = bnf_x(npol)
                    ordn = int(pari("(R)->R.no")(gp("rc")(bn, gp("Pmod")(bn))))
                    nlist.append(ordn)
                    if not is_two_power(ordn):
                        good = False
                solv = good
            wdata[i] = {"index": i, "R_Kp_order": rk_order, "L2": L2, "solvable": solv,
                        "R_N_orders": nlist}
        out["witness_fields"] = list(wdata.values())
        out["L2"] = wdata[p]["L2"]
        out["solvable"] = wdata[p]["solvable"]
        # towers
        unit_rank = r1 + r2 - 1
        towers = []
        for i in range(t):
            f = int(pari("(p)->p.f")(prs[i]))
            lv = tower_levels(b, prs[i], self.cap)
            st = tower_status(lv, f, unit_rank)
            st.update({"index": i, "levels": lv})
            towers.append(st)
        out["towers"] = towers
        fin = [x for x in towers if x["status"] == "Finite"]
        if t == 2 and not fin:
            out["stage"] = "rejected"
            out["step"] = 6
            out["reason"] = "no_finite_tower"
            return out, exts
        if t == 3:
            if len(fin) < 3:
                out["stage"] = "rejected"
                out["step"] = 6
                out["reason"] = "tower_not_finite"
                return out, exts
            # step 7 via relative field prime decomposition
            c = gp("cfact")(b, prs[p])
            R = gp("rc")(b, pari.idealpow(b, c, 2))
            relpol = pari.bnrclassfield(R, 2)[0]
            rnf = pari.rnfinit(b, relpol)
            ns = {}
            for j in range(t):
                if j == p:
                    continue
                ns[j] = len(pari.rnfidealprimedec(rnf, prs[j])) == 1
            out["not_split_in_witness"] = [{"index": j, "not_split": v} for j, v in ns.items()]
            p2 = next((j for j in order if j != p and ns[j]), None)
            if p2 is None:
                out["stage"] = "rejected"
                out["step"] = 7
                out["reason"] = "splits_in_witness"
                return out, exts
            p3 = next(j for j in order if j not in (p, p2))
            qe1 = quotient_dim(b, pari.idealpow(b, pari.idealmul(b, prs[p2], prs[p3]), 2), [prs[p]]) == 0
            qe2 = quotient_dim(b, pari.idealpow(b, prs[p3], 2), [prs[p2]]) == 0
            out["ordering"] = [p, p2, p3]
            out["qe1"] = qe1
            out["qe2"] = qe2
        return self.finish(out, b, n, d), exts

    def finish(self, out, b, n, d):
        # root discriminant compared through floating point only for the reference
        delta = abs(d) ** (1.0 / n)
        od = odlyzko_lookup(self.odl, 4 * delta)
        out["od"] = od
        L2 = out["L2"]
        if od is None:
            out["stage"] = "inconclusive"
            out["reason"] = "root_disc_too_large"
            return out
        ok = od < 9 * L2 or (out["solvable"] and od < 60 * L2)
        out["stage"] = "fontaine" if ok else "noprosaic"
        t = out["t"]
        if t == 1:
            out["path"] = "OnePrime"
        else:
            out["path"] = ("TwoPrime" if t == 2 else "ThreePrime") + out["dichotomy"]
        return out


# ---------------------------------------------------------------- writers

def dump(path, obj, compact=False):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w") as fh:
        if compact:
            fh.write(json.dumps(obj, separators=(",", ":")))
        else:
            json.dump(obj, fh, indent=1)
        fh.write("\n")


def write_jsonl(path, recs):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w") as fh:
        for r in recs:
            fh.write(json.dumps(r, separators=(",", ":")) + "\n")


def lmfdb_entry(label, b):
    n = nf_degree(b)
    pol = pari("(b)->b.pol")(b)
    d = int(pari("(b)->b.disc")(b))
    a = lambda z: str(pari.subst(pari.lift(z), "y", "a")) if not isinstance(z, int) else str(z)
    tu = pari("(b)->b.tu")(b)
    return {
        "label": label,
        "coeffs": [int(pari.polcoef(pol, i, "y")) for i in range(n + 1)],
        "degree": n,
        "r2": int(pari("(b)->b.r2")(b)),
        "disc_abs": abs(d),
        "disc_sign": 1 if d > 0 else -1,
        "class_number": int(pari("(b)->b.no")(b)),
        "narrow_class_number": int(gp("hplus")(b)),
        "zk": [str(pari.subst(z, "y", "a")) for z in pari("(b)->b.zk")(b)],
        "units": [a(u) for u in pari("(b)->b.fu")(b)],
        "torsion_gen": a(tu[1]),
        "torsion_order": int(tu[0]),
        "rd": float(abs(d)) ** (1.0 / n),
    }


def lmfdb_cache(root, degree, max_rd, limit, fields):
    key_src = f"nf_fields;degree={degree};max_rd={max_rd};limit={limit}"
    key = hashlib.sha256(key_src.encode()).hexdigest()
    base = "https://www.lmfdb.org"
    entries = [lmfdb_entry(lab, b) for lab, _, b in fields]
    nxt_url = lambda off: (f"{base}/api/nf_fields/?_format=json&_sort=disc_abs,label&degree={degree}"
                           f"&narrow_class_number=1&rd=0-{max_rd}&_limit={limit}&_offset={off}")
    d = os.path.join(root, "data", "cache", "lmfdb", key)
    os.makedirs(d, exist_ok=True)
    for off in range(0, max(len(entries), 1), limit):
        chunk = entries[off:off + limit]
        body = {"data": chunk, "offset": off,
                "next": nxt_url(off + limit) if off + limit < len(entries) else None}
        with open(os.path.join(d, f"page_{off:06d}.json"), "w") as fh:
            fh.write(json.dumps(body, separators=(",", ":")))
    with open(os.path.join(d, "query.txt"), "w") as fh:
        fh.write(key_src + "\n")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--root", default=os.path.abspath(os.path.join(os.path.dirname(__file__), "..", "..")))
    ap.add_argument("--cap", type=int, default=20)
    ap.add_argument("--skip-deg3", action="store_true")
    args = ap.parse_args()
    root = args.root
    odl = load_odlyzko(os.path.join(root, "data", "odlyzko_grh.csv"))
    g = Generator(root, args.cap, odl)

    deg2 = build_fields(quadratic_polys())
    deg3 = [] if args.skip_deg3 else build_fields(cubic_polys())
    lmfdb_cache(root, 2, "9.5", 25, deg2)
    if deg3:
        lmfdb_cache(root, 3, "9.5", 25, deg3)

    named = {
        "q": ("x", "1.1.1.1"),
        "q_sqrt5": ("x^2 - x - 1", None),
        "q_sqrt13": ("x^2 - x - 3", None),
        "q_sqrt17": ("x^2 - x - 4", None),
        "q_sqrt21": ("x^2 - x - 5", None),
        "q_sqrt2": ("x^2 - 2", None),
        "q_sqrt3": ("x^2 - 3", None),
        "q_sqrt_m7": ("x^2 - x + 2", None),
        "quartic_zeta5": ("x^4 - x^3 + x^2 - x + 1", None),
        "quartic_v4_225": ("x^4 - x^3 + 2*x^2 + x + 1", None),
        "quartic_4primes": ("x^4 - 2*x^3 - x^2 + 2*x + 8", None),
    }
    all_fields = {}
    for lab, p, b in deg2 + deg3:
        all_fields[lab] = b
    named_rec = {}
    for key, (pol, lab) in named.items():
        b = bnf_x(pol)
        if lab is None:
            n = nf_degree(b)
            dd = int(pari("(b)->b.disc")(b))
            lab = lmfdb_label(n, int(pari("(b)->b.r1")(b)), abs(dd), 1)
        all_fields.setdefault(lab, b)
        named_rec[key] = (lab, b)

    outcomes = {}
    packs = {}

    def run(lab, b):
        if lab in outcomes:
            return
        out, exts = g.classify(lab, b)
        outcomes[lab] = out
        if exts:
            packs[lab] = exts
        print(lab, out.get("stage"), out.get("path", out.get("step", "")), flush=True)

    corpus = {}
    for deg, fl in ((2, deg2), (3, deg3)):
        recs = []
        for lab, p, b in fl:
            if int(pari("(b)->b.disc")(b)) % 2 == 0:
                continue
            recs.append(record(b, lab))
            run(lab, b)
        corpus[deg] = recs
        if fl:
            write_jsonl(os.path.join(root, "data", "corpus", f"deg{deg}.jsonl"), recs)
    for key, (lab, b) in named_rec.items():
        dump(os.path.join(root, "data", "fields", f"{key}.json"), record(b, lab))
        run(lab, b)

    three_prime = [lab for lab, o in outcomes.items() if o.get("t") == 3 and o.get("degree") == 3
                   and "towers" in o]
    cubic_one = next((lab for lab, o in outcomes.items() if o.get("degree") == 3 and o.get("t") == 1), None)
    extra_named = {}
    if three_prime:
        extra_named["cubic_3prime"] = three_prime[0]
    if cubic_one:
        extra_named["cubic_1prime"] = cubic_one
    for key, lab in extra_named.items():
        dump(os.path.join(root, "data", "fields", f"{key}.json"), record(all_fields[lab], lab))
        named_rec[key] = (lab, all_fields[lab])

    for lab, exts in packs.items():
        base_rec = record(all_fields[lab], lab)
        dump(os.path.join(root, "data", "packs", f"{lab}.pack.json"),
             {"schema": "fontaine.pack/1", "base": base_rec, "extensions": exts}, compact=True)

    fx = os.path.join(root, "data", "fixtures")
    dump(os.path.join(fx, "reference", "outcomes.json"),
         [outcomes[k] for k in sorted(outcomes)])

    # ray class oracle fixtures
    cases = []
    for k in range(6):
        for inf in (True, False):
            cases.append(("q", [k], inf))
    for k in range(1, 5):
        cases.append(("q_sqrt5", [k], True))
    cases.append(("q_sqrt5", [2], False))
    for e in ([0, 2], [2, 0], [1, 1], [2, 2], [3, 1], [4, 4]):
        cases.append(("q_sqrt17", e, True))
    cases.append(("q_sqrt17", [2, 2], False))
    for e in ([2, 0], [1, 3], [3, 3]):
        cases.append(("q_sqrt_m7", e, True))
    cases += [("q_sqrt13", [2], True), ("q_sqrt13", [3], True)]
    if "cubic_1prime" in named_rec:
        cases += [("cubic_1prime", [2], True), ("cubic_1prime", [4], True)]
    if "cubic_3prime" in named_rec:
        for e in ([0, 0, 2], [2, 2, 0], [2, 2, 2], [1, 2, 3]):
            cases.append(("cubic_3prime", e, True))
    cases += [("quartic_zeta5", [2], True), ("quartic_zeta5", [3], True)]
    cases += [("quartic_v4_225", [2, 2], True), ("quartic_v4_225", [1, 2], True)]
    cases += [("quartic_4primes", [1, 1, 1, 1], True), ("quartic_4primes", [2, 2, 2, 2], True)]
    rc_dir = os.path.join(fx, "rayclass")
    os.makedirs(rc_dir, exist_ok=True)
    for f in os.listdir(rc_dir):
        os.remove(os.path.join(rc_dir, f))
    for key, exps, inf in cases:
        lab, b = named_rec[key]
        prs = pari.idealprimedec(b, 2)
        m = ideal_from_exps(b, prs, exps)
        R = gp("rcz")(b, m, 1 if inf else 0)
        cyc = [int(c) for c in pari("(R)->R.cyc")(R)]
        name = f"{key}__{'-'.join(map(str, exps))}{'_inf' if inf else ''}.json"
        dump(os.path.join(rc_dir, name), {
            "field": f"data/fields/{key}.json", "label": lab,
            "modulus": {"exponents": exps, "infinite": inf},
            "invariants": cyc, "provenance": g.prov})

    # witness / tower / quadratic-existence / extension fixtures
    oracle = {"witness": [], "towers": [], "exists_quadratic": [], "extension_two_group": []}
    for key in ("q", "q_sqrt5", "q_sqrt17", "q_sqrt_m7", "cubic_3prime", "quartic_v4_225"):
        if key not in named_rec:
            continue
        lab, b = named_rec[key]
        prs = list(pari.idealprimedec(b, 2))
        r1 = int(pari("(b)->b.r1")(b))
        r2 = int(pari("(b)->b.r2")(b))
        for i in range(len(prs)):
            deg, inert, _ = witness(b, prs, i)
            oracle["witness"].append({"field": f"data/fields/{key}.json", "prime": i,
                                      "degree": deg, "inert": inert})
            f = int(pari("(p)->p.f")(prs[i]))
            lv = tower_levels(b, prs[i], args.cap)
            st = tower_status(lv, f, r1 + r2 - 1)
            oracle["towers"].append({"field": f"data/fields/{key}.json", "rho": [i],
                                     "levels": lv, **st})
        if len(prs) > 1:
            lv = tower_levels(b, pari.idealfactorback(b, pari.Vec(prs)), 8)
            oracle["towers"].append({"field": f"data/fields/{key}.json",
                                     "rho": list(range(len(prs))), "levels": lv,
                                     **tower_status(lv, sum(int(pari("(p)->p.f")(p)) for p in prs),
                                                    r1 + r2 - 1)})
        t = len(prs)
        import itertools
        for exps in itertools.product(range(0, 3), repeat=t):
            m = ideal_from_exps(b, prs, list(exps))
            for i in range(t):
                if exps[i] != 0:
                    continue
                qd = quotient_dim(b, m, [prs[i]])
                oracle["exists_quadratic"].append({"field": f"data/fields/{key}.json",
                                                   "modulus": {"exponents": list(exps), "infinite": True},
                                                   "split_at": [i], "value": qd > 0})
            qd = quotient_dim(b, m, [])
            oracle["exists_quadratic"].append({"field": f"data/fields/{key}.json",
                                               "modulus": {"exponents": list(exps), "infinite": True},
                                               "split_at": [], "value": qd > 0})
    lab, b = named_rec["q_sqrt17"]
    for bits, pol in g.kummer_fields(b):
        bm = bnf_x(pol)
        ordm = int(pari("(R)->R.no")(gp("rc")(bm, gp("Pmod")(bm))))
        oracle["extension_two_group"].append({"pack": f"data/packs/{lab}.pack.json",
                                              "descriptor": f"kummer:{bits}",
                                              "R_M_order": ordm, "value": is_two_power(ordm)})
    dump(os.path.join(fx, "reference", "oracles.json"), oracle)

    lines = []
    for dirpath, _, files in os.walk(fx):
        for fn in sorted(files):
            if fn == "MANIFEST.sha256":
                continue
            full = os.path.join(dirpath, fn)
            rel = os.path.relpath(full, fx)
            lines.append(f"{hashlib.sha256(open(full, 'rb').read()).hexdigest()}  {rel}")
    lines.sort(key=lambda s: s.split("  ", 1)[1])
    with open(os.path.join(fx, "MANIFEST.sha256"), "w") as fh:
        fh.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    sys.exit(main())

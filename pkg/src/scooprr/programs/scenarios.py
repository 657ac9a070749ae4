"""Registered example programs: producer-consumer, the share market, and the
two-investor transaction whose local computation floats between approvals."""

from __future__ import annotations

from collections.abc import Callable

from .lang import (
    Call,
    ClassDef,
    Compute,
    Create,
    Field,
    If,
    Local,
    NonSeparateCall,
    Predicate,
    Query,
    Repeat,
    Routine,
    Scenario,
    SeparateBlock,
    SetField,
)

# -- producer / consumer ----------------------------------------------------

NOT_EMPTY = Predicate(
    "not (buffer.count = 0)", lambda targets, env: len(targets["buffer"]["items"]) != 0
)


def _buffer_class() -> ClassDef:
    return ClassDef.build(
        "BUFFER",
        {"items": []},
        Routine("put", ("value",), (
            SetField("items", lambda f: f.fields["items"] + [f.locals["value"]]),
        )),
        Routine("item", (), (
            Compute(lambda f: {"Result": f.fields["items"][0]}),
        )),
        Routine("remove", (), (
            SetField("items", lambda f: f.fields["items"][1:]),
        )),
        Routine("count", (), (
            Compute(lambda f: {"Result": len(f.fields["items"])}),
        )),
    )


def scenario_producer_consumer(n_items: int = 3, n_produced: int | None = None) -> Scenario:
    """Producer puts ``n_produced`` items (default ``n_items``), consumer takes
    ``n_items``; each consume waits until the buffer is non-empty."""
    if n_items < 0:
        raise ValueError("n_items must be >= 0")
    if n_produced is None:
        n_produced = n_items
    producer = ClassDef.build(
        "PRODUCER",
        {"produced": []},
        Routine("produce", ("buffer", "n"), (
            Repeat(Local("n"), (
                NonSeparateCall("put_one", (Local("buffer"), lambda f: 10 * (f.locals["i"] + 1))),
            ), index="i"),
        )),
        Routine("put_one", ("buffer", "value"), (
            Call("buffer", "put", (Local("value"),)),
            SetField("produced", lambda f: f.fields["produced"] + [f.locals["value"]]),
        ), separate=("buffer",)),
    )
    consumer = ClassDef.build(
        "CONSUMER",
        {"consumed": []},
        Routine("consume_all", ("buffer", "n"), (
            Repeat(Local("n"), (NonSeparateCall("consume", (Local("buffer"),)),)),
        )),
        Routine("consume", ("buffer",), (
            Query("buffer", "item", bind="consumed_item"),
            Call("buffer", "remove"),
            # reading consumed_item waits by necessity
            SetField("consumed", lambda f: f.fields["consumed"] + [f.locals["consumed_item"]]),
        ), separate=("buffer",), require=NOT_EMPTY),
    )
    root = ClassDef.build(
        "APPLICATION",
        {},
        Routine("main", (), (
            Create("producer", "PRODUCER"),
            Create("consumer", "CONSUMER"),
            Create("buffer", "BUFFER"),
            SeparateBlock(("producer", "consumer"), (
                Call("producer", "produce", (Local("buffer"), n_produced)),
                Call("consumer", "consume_all", (Local("buffer"), n_items)),
            )),
        )),
    )
    classes = {c.name: c for c in (root, producer, consumer, _buffer_class())}
    return Scenario(
        "producer-consumer",
        classes,
        "APPLICATION",
        parameters={"n_items": n_items, "n_produced": n_produced},
    )


# -- share market -----------------------------------------------------------

SOFTWARE_COMPANY = 1
N_ISSUERS = 4

CAN_BUY = Predicate(
    "market.can_buy (id, issuer_id)",
    lambda targets, env: targets["market"]["owners"][env["issuer_id"]] == 0,
)


def _with_owner(f) -> list[int]:
    owners = list(f.fields["owners"])
    if owners[f.locals["issuer_id"]] != 0:
        raise AssertionError("share sold twice")
    owners[f.locals["issuer_id"]] = f.locals["investor_id"]
    return owners


def _market_class() -> ClassDef:
    # owners[issuer] is the id of the investor holding that issuer's share
    return ClassDef.build(
        "MARKET",
        {"owners": [0] * N_ISSUERS, "buyers": [], "issuers": []},
        Routine("buy", ("investor_id", "issuer_id"), (
            SetField("owners", _with_owner),
            SetField("buyers", lambda f: f.fields["buyers"] + [f.locals["investor_id"]]),
            SetField("issuers", lambda f: f.fields["issuers"] + [f.locals["issuer_id"]]),
        )),
        Routine("can_buy", ("investor_id", "issuer_id"), (
            Compute(lambda f: {"Result": f.fields["owners"][f.locals["issuer_id"]] == 0}),
        )),
    )


def _investor_class() -> ClassDef:
    return ClassDef.build(
        "INVESTOR",
        {"id": 0},
        Routine("buy", ("market", "issuer_id"), (
            Call("market", "buy", (Field("id"), Local("issuer_id"))),
        ), separate=("market",), require=CAN_BUY),
        Routine("buy_alternative", ("market", "issuer_id", "backup_market", "backup_issuer_id"), (
            Query("market", "can_buy", (Field("id"), Local("issuer_id")), bind="available"),
            If(Local("available"),
               (Call("market", "buy", (Field("id"), Local("issuer_id"))),),
               (NonSeparateCall("buy", (Local("backup_market"), Local("backup_issuer_id"))),)),
        ), separate=("market",)),
        Routine("get_id", (), (Compute(lambda f: {"Result": f.fields["id"]}),)),
    )


def scenario_market_deadlock(extra_investor: bool = False) -> Scenario:
    """Two investors each buy the software-company share on their own market,
    then try again with buy_alternative, falling back to the other market.

    Processor ids: application root, first investor root.1, second investor
    root.2, Zurich market root.3, New York market root.4. ``extra_investor``
    adds a third investor and market (root.5, root.6) so recorded market
    traces no longer fit the program.
    """
    sw = SOFTWARE_COMPANY
    params = ["first_investor", "second_investor", "zurich", "new_york"]
    body = [
        Call("first_investor", "buy", (Local("zurich"), sw)),
        Call("second_investor", "buy", (Local("new_york"), sw)),
        Call("first_investor", "buy_alternative", (Local("zurich"), sw, Local("new_york"), 2)),
        Call("second_investor", "buy_alternative", (Local("new_york"), sw, Local("zurich"), 3)),
    ]
    creates = [
        Create("first_investor", "INVESTOR", {"id": 1}),
        Create("second_investor", "INVESTOR", {"id": 2}),
        Create("zurich", "MARKET"),
        Create("new_york", "MARKET"),
    ]
    controlled = ["first_investor", "second_investor"]
    if extra_investor:
        creates += [Create("third_investor", "INVESTOR", {"id": 3}), Create("tokyo", "MARKET")]
        params += ["third_investor", "tokyo"]
        controlled.append("third_investor")
        body.append(Call("third_investor", "buy", (Local("tokyo"), sw)))
    root = ClassDef.build(
        "APPLICATION",
        {},
        Routine("main", (), (
            *creates,
            NonSeparateCall("transaction", tuple(Local(p) for p in params)),
        )),
        Routine("transaction", tuple(params), tuple(body), separate=tuple(controlled)),
    )
    classes = {c.name: c for c in (root, _investor_class(), _market_class())}
    return Scenario(
        "market",
        classes,
        "APPLICATION",
        parameters={"software_company": sw, "extra_investor": int(extra_investor)},
    )


def scenario_fig1_transaction(base_issuer_id: int = 1) -> Scenario:
    """Two investors buy consecutive issuers on one market; computing the
    second issuer id is a local step that may run before or after the first
    purchase."""
    root = ClassDef.build(
        "APPLICATION",
        {},
        Routine("main", (), (
            Create("first_investor", "INVESTOR", {"id": 1}),
            Create("second_investor", "INVESTOR", {"id": 2}),
            Create("market", "MARKET"),
            NonSeparateCall("do_transaction", (
                Local("first_investor"), Local("second_investor"), Local("market"), base_issuer_id,
            )),
        )),
        Routine(
            "do_transaction",
            ("first_investor", "second_investor", "market", "base_issuer_id"),
            (
                Call("first_investor", "buy", (Local("market"), Local("base_issuer_id"))),
                Compute(lambda f: {"next_issuer_id": f.locals["base_issuer_id"] + 1},
                        label="next_issuer_id"),
                Call("second_investor", "buy", (Local("market"), Local("next_issuer_id"))),
            ),
            separate=("first_investor", "second_investor"),
        ),
    )
    classes = {c.name: c for c in (root, _investor_class(), _market_class())}
    return Scenario("fig1", classes, "APPLICATION", parameters={"base_issuer_id": base_issuer_id})


SCENARIOS: dict[str, Callable[..., Scenario]] = {
    "producer-consumer": scenario_producer_consumer,
    "market": scenario_market_deadlock,
    "fig1": scenario_fig1_transaction,
}


def get_scenario(name: str, **params) -> Scenario:
    try:
        factory = SCENARIOS[name]
    except KeyError:
        raise KeyError(f"unknown scenario {name!r}") from None
    return factory(**params)

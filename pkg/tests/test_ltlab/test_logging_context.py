import unittest

from sure import expect

from ltlab import logging_context as ctx


class TestProcessContext(unittest.TestCase):
    def tearDown(self):
        ctx.reset()

    def test_set_and_get(self):
        expect(ctx.get("job")).to.equal("")
        expect(ctx.get("case")).to.equal("")

        ctx.set("job", 2)
        ctx.set("case", 17)
        expect(ctx.get("job")).to.equal("2")
        expect(ctx.get("case")).to.equal("17")

    def test_set_and_get_invalid_key(self):
        (expect(ctx.set)
            .when.called_with("workflow_id", "bar")
            .to.have.raised(KeyError))

        (expect(ctx.get)
            .when.called_with("workflow_id")
            .to.have.raised(KeyError))

    def test_reset(self):
        ctx.set("job", 0)
        expect(ctx.get("job")).to.equal("0")

        ctx.reset()
        expect(ctx.get("job")).to.equal("")

    def test_describe(self):
        expect(ctx.describe()).to.equal("")
        ctx.set("case", 3)
        expect(ctx.describe()).to.equal("case=3")
        ctx.set("job", 1)
        expect(ctx.describe()).to.equal("job=1 case=3")

    def test_scope_resets_on_error(self):
        with ctx.scope(job=4, case=0):
            expect(ctx.describe()).to.equal("job=4 case=0")
        expect(ctx.describe()).to.equal("")

        def fail():
            with ctx.scope(job=5):
                raise ValueError("boom")

        expect(fail).when.called_with().to.have.raised(ValueError)
        expect(ctx.get("job")).to.equal("")

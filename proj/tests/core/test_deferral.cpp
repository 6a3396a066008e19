#include "doctest.h"
#include "rcfd/core/deferral.hpp"

using namespace rcfd;
using namespace rcfd::core;

TEST_CASE("an overheard CTS defers until the matching ACK")
{
  DeferState st;
  CHECK_FALSE(st.deferred());
  st = deferring_update(st, {DeferEvent::Kind::HeardCts, 100, 1, 500});
  CHECK(st.deferred());
  CHECK(st.expires_at() == 600);
  // An ACK from another node leaves the deferral in place.
  st = deferring_update(st, {DeferEvent::Kind::HeardAck, 200, 7, 0});
  CHECK(st.deferred());
  st = deferring_update(st, {DeferEvent::Kind::HeardAck, 300, 1, 0});
  CHECK_FALSE(st.deferred());
}

TEST_CASE("a lost ACK is covered by the timeout")
{
  DeferState st = deferring_update({}, {DeferEvent::Kind::HeardCts, 0, 2, 1000});
  st = deferring_update(st, {DeferEvent::Kind::Timeout, 999, 0, 0});
  CHECK(st.deferred());
  st = deferring_update(st, {DeferEvent::Kind::Timeout, 1000, 0, 0});
  CHECK_FALSE(st.deferred());
}

TEST_CASE("several CTS sources are tracked independently")
{
  DeferState st = deferring_update({}, {DeferEvent::Kind::HeardCts, 0, 2, 1000});
  st = deferring_update(st, {DeferEvent::Kind::HeardCts, 10, 3, 1000});
  CHECK(st.next_expiry() == 1000);
  CHECK(st.expires_at() == 1010);
  st = deferring_update(st, {DeferEvent::Kind::HeardAck, 20, 2, 0});
  CHECK(st.deferred());
  st = deferring_update(st, {DeferEvent::Kind::Timeout, 1010, 0, 0});
  CHECK_FALSE(st.deferred());
}

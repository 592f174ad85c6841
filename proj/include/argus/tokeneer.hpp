#pragma once

#include <string>
#include <vector>

#include "argus/gcl.hpp"

namespace argus {

// Mutations used by the necessity tests: each removes one ingredient the
// security proofs depend on.
struct TokeneerOptions {
  bool omitInv2 = false;
  bool omitInv5 = false;
  bool omitAvailableOpsReset = false;  // drop `availableOps := {}` from AdminLogout
};

// Programmatic twin of corpus/tokeneer_mini.gcl. The checked-in file and this
// builder must produce structurally equal modules (tested).
inline GclModule build_tokeneer(const TokeneerOptions& opt = {}) {
  GclModule m;
  m.name = "tokeneer_mini";

  auto presence = [] { return FiniteType::enumeration({"present", "absent"}); };
  auto latchTy = [] { return FiniteType::enumeration({"unlocked", "locked"}); };
  auto alarmTy = [] { return FiniteType::enumeration({"silent", "alarming"}); };
  auto displayTy = [] {
    return FiniteType::enumeration({"blank", "wait", "insertFinger", "doorUnlocked", "removeToken"});
  };
  auto adminOpNames = [] {
    return std::vector<std::string>{"archiveLog", "updateConfigData", "overrideLock", "shutdownOp"};
  };
  auto timeTy = [] { return FiniteType::bounded_int(0, 7); };

  m.schema = Schema({
      SchemaNode::ns(
          "tis",
          {
              SchemaNode::leaf("status", FiniteType::enumeration(
                                             {"quiescent", "gotUserToken", "waitingFinger",
                                              "gotFinger", "waitingUpdateToken", "waitingEntry",
                                              "waitingRemoveTokenSuccess", "waitingRemoveTokenFail"})),
              SchemaNode::leaf("enclaveStatus",
                               FiniteType::enumeration({"notEnrolled", "enclaveQuiescent",
                                                        "waitingRemoveAdminTokenFail",
                                                        "waitingStartAdminOp", "waitingFinishAdminOp",
                                                        "shutdown"})),
              SchemaNode::leaf("currentUserToken",
                               FiniteType::enumeration({"noT", "badT", "goodNoAuth",
                                                        "goodWithAuthUser", "goodWithAuthGuard",
                                                        "goodWithAuthAuditMgr",
                                                        "goodWithAuthSecOfficer"})),
              SchemaNode::leaf("currentAdminToken",
                               FiniteType::enumeration({"noT", "badT", "goodNoAuth",
                                                        "goodWithAuthUser", "goodWithAuthGuard",
                                                        "goodWithAuthAuditMgr",
                                                        "goodWithAuthSecOfficer"})),
              SchemaNode::leaf("userTokenPresence", presence()),
              SchemaNode::leaf("adminTokenPresence", presence()),
              SchemaNode::leaf("fingerPresence", presence()),
              SchemaNode::leaf("floppyPresence", presence()),
              SchemaNode::leaf("fingerOK", FiniteType::boolean()),
              SchemaNode::leaf("floppyConfigValid", FiniteType::boolean()),
              SchemaNode::leaf("currentLatch", latchTy()),
              SchemaNode::leaf("doorAlarm", alarmTy()),
              SchemaNode::leaf("currentDoor", FiniteType::enumeration({"open", "closed"})),
              SchemaNode::leaf("currentDisplay", displayTy()),
              SchemaNode::leaf("rolePresent",
                               FiniteType::optional(FiniteType::enumeration(
                                   {"guard", "auditManager", "securityOfficer"}))),
              SchemaNode::leaf("availableOps", FiniteType::set_of(adminOpNames())),
              SchemaNode::leaf("currentAdminOp",
                               FiniteType::optional(FiniteType::enumeration(adminOpNames()))),
              SchemaNode::leaf("currentTime", timeTy()),
              SchemaNode::leaf("latchTimeout", timeTy()),
              SchemaNode::leaf("alarmTimeout", timeTy()),
              SchemaNode::leaf("config", FiniteType::enumeration({"cfgA", "cfgB"})),
              SchemaNode::leaf("ownName",
                               FiniteType::optional(FiniteType::enumeration({"station1"}))),
          }),
      SchemaNode::ns("rw",
                     {
                         SchemaNode::ns("mon",
                                        {
                                            SchemaNode::leaf("now", timeTy()),
                                            SchemaNode::leaf("floppy",
                                                             FiniteType::enumeration(
                                                                 {"noFloppy", "emptyFloppy",
                                                                  "badFloppy", "cfgFloppyA",
                                                                  "cfgFloppyB"})),
                                        }),
                         SchemaNode::ns("ctrl",
                                        {
                                            SchemaNode::leaf("latch", latchTy()),
                                            SchemaNode::leaf("alarm", alarmTy()),
                                            SchemaNode::leaf("display", displayTy()),
                                        }),
                     }),
  });

  const Schema& root = m.schema;
  Schema tis = root.subschema(Path::parse("tis"));
  Path tisPath = Path::parse("tis");
  std::uint32_t tisLo = root.ns_range(tisPath)->first;

  // -- expression helpers over the tis scope ---------------------------------
  auto tv = [&](const char* p) { return mk_var(tis, Path::parse(p)); };
  auto tt = [&](const char* p) { return tis.leaf(*tis.find_leaf(Path::parse(p))).type; };
  auto lit = [&](const char* leafName, const char* ctor) {
    auto ty = tt(leafName);
    int ix = ty->ctor_index(ctor);
    if (ix < 0) throw Error("Internal", std::string("bad ctor ") + ctor);
    return mk_lit(ty, static_cast<std::uint32_t>(ix));
  };
  auto optLit = [&](const char* leafName, const char* ctor) {
    auto ty = tt(leafName);  // option type
    if (!ctor) return mk_lit(ty, 0);  // None
    int ix = ty->inner->ctor_index(ctor);
    if (ix < 0) throw Error("Internal", std::string("bad ctor ") + ctor);
    return mk_lit(ty, static_cast<std::uint32_t>(ix) + 1);
  };
  auto veq = [&](const char* leafName, const char* ctor) { return mk_eq(tv(leafName), lit(leafName, ctor)); };
  auto inset = [&](const char* leafName, std::vector<std::string> ctors) {
    auto ty = tt(leafName);
    std::vector<std::uint32_t> ords;
    for (auto& c : ctors) ords.push_back(static_cast<std::uint32_t>(ty->ctor_index(c)));
    return mk_in_set(tv(leafName), ords);
  };
  auto setlit = [&](std::vector<std::string> ctors) {
    auto ty = tt("availableOps");
    std::uint32_t mask = 0;
    for (auto& c : ctors) mask |= 1u << ty->ctor_index(c);
    return mk_lit(ty, mask);
  };
  auto ands = [&](std::vector<ExprPtr> es) {
    ExprPtr out = es.front();
    for (size_t i = 1; i < es.size(); ++i) out = mk_and(out, es[i]);
    return out;
  };
  auto ors = [&](std::vector<ExprPtr> es) {
    ExprPtr out = es.front();
    for (size_t i = 1; i < es.size(); ++i) out = mk_or(out, es[i]);
    return out;
  };
  auto timePlus = [&](const char* leafName, long k) {
    return mk_plus(tv(leafName), mk_lit(tt(leafName), tt(leafName)->ord_of_int(k)));
  };

  auto addPred = [&](const char* name, Path scope, ExprPtr e) {
    m.declSeq.emplace_back('p', m.preds.size());
    m.preds.push_back({name, std::move(scope), std::move(e)});
  };

  // -- token and role predicates (certificate layer collapsed into the token
  //    enumeration; validity of certificates is a token class, not a record)
  ExprPtr userTokenOK = inset("currentUserToken", {"goodNoAuth", "goodWithAuthUser"});
  addPred("UserTokenOK", tisPath, userTokenOK);
  ExprPtr userTokenAuth = veq("currentUserToken", "goodWithAuthUser");
  addPred("UserTokenWithOKAuthCert", tisPath, userTokenAuth);
  ExprPtr adminTokenOK = inset("currentAdminToken",
                               {"goodWithAuthGuard", "goodWithAuthAuditMgr", "goodWithAuthSecOfficer"});
  addPred("AdminTokenOK", tisPath, adminTokenOK);
  ExprPtr adminTokenGuardOK = veq("currentAdminToken", "goodWithAuthGuard");
  addPred("AdminTokenGuardOK", tisPath, adminTokenGuardOK);
  ExprPtr fingerOKP = mk_eq(tv("fingerOK"), mk_true());
  addPred("FingerOK", tisPath, fingerOKP);

  ExprPtr rolePresentNone = mk_eq(tv("rolePresent"), optLit("rolePresent", nullptr));
  auto roleIs = [&](const char* r) { return mk_eq(tv("rolePresent"), optLit("rolePresent", r)); };

  ExprPtr doorLatchAlarm =
      mk_implies(ands({veq("currentDoor", "open"), veq("currentLatch", "locked"),
                       mk_leq(tv("alarmTimeout"), tv("currentTime"))}),
                 veq("doorAlarm", "alarming"));
  addPred("DoorLatchAlarm", tisPath, doorLatchAlarm);

  ExprPtr tokenWf = mk_and(
      mk_implies(veq("status", "gotUserToken"), mk_neq(tv("currentUserToken"), lit("currentUserToken", "noT"))),
      mk_implies(inset("enclaveStatus", {"waitingStartAdminOp", "waitingFinishAdminOp"}),
                 mk_neq(tv("currentAdminToken"), lit("currentAdminToken", "noT"))));
  addPred("TokenWf", tisPath, tokenWf);

  ExprPtr admin = ands({
      mk_implies(mk_not(rolePresentNone),
                 mk_in_set(mk_the(tv("rolePresent")), {0, 1, 2})),
      mk_implies(rolePresentNone, mk_eq(tv("availableOps"), setlit({}))),
      mk_implies(roleIs("guard"), mk_eq(tv("availableOps"), setlit({"overrideLock"}))),
      mk_implies(roleIs("auditManager"), mk_eq(tv("availableOps"), setlit({"archiveLog"}))),
      mk_implies(roleIs("securityOfficer"),
                 mk_eq(tv("availableOps"), setlit({"updateConfigData", "shutdownOp"}))),
      mk_implies(mk_neq(tv("currentAdminOp"), optLit("currentAdminOp", nullptr)),
                 mk_and(mk_member(mk_the(tv("currentAdminOp")), tv("availableOps")),
                        mk_not(rolePresentNone))),
  });
  addPred("Admin", tisPath, admin);

  ExprPtr tisWf = ands({doorLatchAlarm, admin, tokenWf});
  addPred("TIS_wf", tisPath, tisWf);

  ExprPtr inv1 = mk_implies(inset("status", {"gotFinger", "waitingFinger", "waitingUpdateToken",
                                             "waitingEntry", "waitingRemoveTokenSuccess"}),
                            mk_or(userTokenAuth, userTokenOK));
  addPred("Inv1", tisPath, inv1);
  ExprPtr inv2 = mk_implies(inset("status", {"waitingEntry", "waitingRemoveTokenSuccess"}),
                            mk_or(userTokenAuth, fingerOKP));
  addPred("Inv2", tisPath, inv2);
  ExprPtr inv3 = mk_implies(mk_not(rolePresentNone), adminTokenOK);
  addPred("Inv3", tisPath, inv3);
  ExprPtr inv4 = mk_implies(
      mk_in_set(tv("currentAdminOp"), {optLit("currentAdminOp", "shutdownOp")->ord,
                                       optLit("currentAdminOp", "overrideLock")->ord}),
      mk_neq(tv("ownName"), optLit("ownName", nullptr)));
  addPred("Inv4", tisPath, inv4);
  ExprPtr inv5 = mk_implies(
      mk_and(veq("adminTokenPresence", "present"), mk_not(rolePresentNone)),
      ands({mk_implies(roleIs("guard"), veq("currentAdminToken", "goodWithAuthGuard")),
            mk_implies(roleIs("auditManager"), veq("currentAdminToken", "goodWithAuthAuditMgr")),
            mk_implies(roleIs("securityOfficer"),
                       veq("currentAdminToken", "goodWithAuthSecOfficer"))}));
  addPred("Inv5", tisPath, inv5);

  std::vector<ExprPtr> invParts{tisWf, inv1};
  if (!opt.omitInv2) invParts.push_back(inv2);
  invParts.push_back(inv3);
  invParts.push_back(inv4);
  if (!opt.omitInv5) invParts.push_back(inv5);
  ExprPtr tisInv = ands(invParts);
  addPred("TIS_inv", tisPath, tisInv);

  ExprPtr adminOpEnabled = mk_and(mk_not(rolePresentNone),
                                  mk_neq(tv("currentAdminOp"), optLit("currentAdminOp", nullptr)));
  addPred("AdminOpEnabled", tisPath, adminOpEnabled);

  // -- operations over the tis state ------------------------------------------
  auto tassign = [&](const char* p, ExprPtr v) { return mk_assign(tis, Path::parse(p), std::move(v)); };
  auto tseq = [&](std::vector<ProgPtr> ps) {
    ProgPtr out = ps.front();
    for (size_t i = 1; i < ps.size(); ++i) out = mk_seq(out, ps[i]);
    return out;
  };

  auto addProg = [&](const char* name, Path scope, ProgPtr p) {
    m.declSeq.emplace_back('d', m.progs.size());
    m.progs.push_back({name, std::move(scope), std::move(p)});
  };

  ProgPtr unlockDoor = tseq({
      tassign("latchTimeout", timePlus("currentTime", 1)),
      tassign("alarmTimeout", timePlus("currentTime", 2)),
      tassign("currentLatch", lit("currentLatch", "unlocked")),
      tassign("doorAlarm", lit("doorAlarm", "silent")),
  });
  addProg("UnlockDoor", tisPath, unlockDoor);

  ProgPtr lockDoor = tseq({
      tassign("currentLatch", lit("currentLatch", "locked")),
      tassign("latchTimeout", tv("currentTime")),
      tassign("alarmTimeout", timePlus("currentTime", 1)),
  });
  addProg("LockDoor", tisPath, lockDoor);

  ProgPtr readUserToken = mk_guard(
      ands({inset("enclaveStatus", {"enclaveQuiescent", "waitingRemoveAdminTokenFail"}),
            veq("status", "quiescent"), veq("userTokenPresence", "present")}),
      tseq({mk_havoc(tis, Path::parse("currentUserToken"),
                     mk_neq(mk_bound("new", tt("currentUserToken")), lit("currentUserToken", "noT"))),
            tassign("currentDisplay", lit("currentDisplay", "wait")),
            tassign("status", lit("status", "gotUserToken"))}));
  addProg("ReadUserToken", tisPath, readUserToken);

  ProgPtr bioCheckRequired =
      mk_guard(ands({veq("status", "gotUserToken"), veq("userTokenPresence", "present"), userTokenOK,
                     mk_not(userTokenAuth)}),
               tseq({tassign("status", lit("status", "waitingFinger")),
                     tassign("currentDisplay", lit("currentDisplay", "insertFinger"))}));
  addProg("BioCheckRequired", tisPath, bioCheckRequired);

  ProgPtr bioCheckNotRequired =
      mk_guard(ands({veq("status", "gotUserToken"), veq("userTokenPresence", "present"), userTokenAuth}),
               tseq({tassign("status", lit("status", "waitingEntry")),
                     tassign("currentDisplay", lit("currentDisplay", "wait"))}));
  addProg("BioCheckNotRequired", tisPath, bioCheckNotRequired);

  ProgPtr validateUserToken = mk_choice(bioCheckRequired, bioCheckNotRequired);
  addProg("ValidateUserToken", tisPath, validateUserToken);

  ProgPtr readFingerOK =
      mk_guard(ands({veq("status", "waitingFinger"), veq("fingerPresence", "present"),
                     veq("userTokenPresence", "present")}),
               tseq({tassign("status", lit("status", "gotFinger")),
                     tassign("currentDisplay", lit("currentDisplay", "wait"))}));
  addProg("ReadFingerOK", tisPath, readFingerOK);

  ProgPtr validateFingerOK =
      mk_guard(mk_and(veq("status", "gotFinger"), veq("userTokenPresence", "present")),
               tseq({tassign("fingerOK", mk_true()),
                     tassign("status", lit("status", "waitingUpdateToken")),
                     tassign("currentDisplay", lit("currentDisplay", "wait"))}));
  addProg("ValidateFingerOK", tisPath, validateFingerOK);

  ProgPtr writeUserTokenOK =
      mk_guard(mk_and(veq("status", "waitingUpdateToken"), veq("userTokenPresence", "present")),
               tseq({tassign("currentUserToken", lit("currentUserToken", "goodWithAuthUser")),
                     tassign("status", lit("status", "waitingEntry")),
                     tassign("currentDisplay", lit("currentDisplay", "wait"))}));
  addProg("WriteUserTokenOK", tisPath, writeUserTokenOK);

  ProgPtr entryOK =
      mk_guard(mk_and(veq("status", "waitingEntry"), veq("userTokenPresence", "present")),
               tseq({tassign("status", lit("status", "waitingRemoveTokenSuccess")),
                     tassign("currentDisplay", lit("currentDisplay", "removeToken"))}));
  addProg("EntryOK", tisPath, entryOK);

  ProgPtr unlockDoorOK =
      mk_guard(mk_and(veq("status", "waitingRemoveTokenSuccess"), veq("userTokenPresence", "absent")),
               tseq({unlockDoor, tassign("status", lit("status", "quiescent")),
                     tassign("currentDisplay", lit("currentDisplay", "doorUnlocked"))}));
  addProg("UnlockDoorOK", tisPath, unlockDoorOK);

  ProgPtr failedAccess =
      mk_guard(mk_and(veq("status", "waitingRemoveTokenFail"), veq("userTokenPresence", "absent")),
               tseq({tassign("status", lit("status", "quiescent")),
                     tassign("currentDisplay", lit("currentDisplay", "blank"))}));
  addProg("FailedAccess", tisPath, failedAccess);

  ProgPtr overrideDoorLockOK = mk_guard(
      ands({veq("enclaveStatus", "waitingStartAdminOp"), veq("adminTokenPresence", "present"),
            mk_eq(tv("currentAdminOp"), optLit("currentAdminOp", "overrideLock"))}),
      tseq({tassign("currentDisplay", lit("currentDisplay", "doorUnlocked")),
            tassign("enclaveStatus", lit("enclaveStatus", "enclaveQuiescent")), unlockDoor,
            tassign("currentAdminOp", optLit("currentAdminOp", nullptr))}));
  addProg("OverrideDoorLockOK", tisPath, overrideDoorLockOK);

  ProgPtr finishUpdateConfigOK = mk_guard(
      ands({veq("enclaveStatus", "waitingFinishAdminOp"), veq("adminTokenPresence", "present"),
            mk_eq(tv("currentAdminOp"), optLit("currentAdminOp", "updateConfigData")),
            veq("floppyPresence", "present"), mk_eq(tv("floppyConfigValid"), mk_true())}),
      tseq({mk_havoc(tis, Path::parse("config"), mk_true()),
            tassign("enclaveStatus", lit("enclaveStatus", "enclaveQuiescent")),
            tassign("currentAdminOp", optLit("currentAdminOp", nullptr))}));
  addProg("FinishUpdateConfigOK", tisPath, finishUpdateConfigOK);

  std::vector<ProgPtr> logoutBody{tassign("rolePresent", optLit("rolePresent", nullptr)),
                                  tassign("currentAdminOp", optLit("currentAdminOp", nullptr))};
  if (!opt.omitAvailableOpsReset) logoutBody.push_back(tassign("availableOps", setlit({})));
  ProgPtr adminLogout = mk_guard(mk_not(rolePresentNone), tseq(logoutBody));
  addProg("AdminLogout", tisPath, adminLogout);

  ProgPtr shutdownOK = mk_guard(
      ands({veq("enclaveStatus", "waitingStartAdminOp"),
            mk_eq(tv("currentAdminOp"), optLit("currentAdminOp", "shutdownOp")),
            veq("currentDoor", "closed")}),
      tseq({lockDoor, adminLogout, tassign("enclaveStatus", lit("enclaveStatus", "shutdown")),
            tassign("currentDisplay", lit("currentDisplay", "blank"))}));
  addProg("ShutdownOK", tisPath, shutdownOK);

  // -- promotion to the full system state -------------------------------------
  Schema rw = root.subschema(Path::parse("rw"));
  ProgPtr worldStep = mk_frame(
      root, Path::parse("rw"),
      mk_havoc(rw, Path::parse("mon.now"),
               mk_leq(mk_var(rw, Path::parse("mon.now")),
                      mk_bound("new", rw.leaf(*rw.find_leaf(Path::parse("mon.now"))).type))));
  addProg("WorldStep", Path{}, worldStep);

  auto uec = [&](ProgPtr op) { return mk_seq(mk_frame(root, tisPath, std::move(op)), worldStep); };

  ProgPtr tisReadUserToken = uec(readUserToken);
  addProg("TISReadUserToken", Path{}, tisReadUserToken);
  ProgPtr tisValidateUserToken = uec(validateUserToken);
  addProg("TISValidateUserToken", Path{}, tisValidateUserToken);
  ProgPtr tisReadFinger = uec(readFingerOK);
  addProg("TISReadFinger", Path{}, tisReadFinger);
  ProgPtr tisValidateFinger = uec(validateFingerOK);
  addProg("TISValidateFinger", Path{}, tisValidateFinger);
  ProgPtr tisWriteUserToken = uec(writeUserTokenOK);
  addProg("TISWriteUserToken", Path{}, tisWriteUserToken);
  ProgPtr tisValidateEntry = uec(entryOK);
  addProg("TISValidateEntry", Path{}, tisValidateEntry);
  ProgPtr tisUnlockDoor = uec(unlockDoorOK);
  addProg("TISUnlockDoor", Path{}, tisUnlockDoor);
  ProgPtr tisCompleteFailedAccess = uec(failedAccess);
  addProg("TISCompleteFailedAccess", Path{}, tisCompleteFailedAccess);

  auto choices = [&](std::vector<ProgPtr> ps) {
    ProgPtr out = ps.front();
    for (size_t i = 1; i < ps.size(); ++i) out = mk_choice(out, ps[i]);
    return out;
  };

  ProgPtr tisUserEntryOp =
      choices({tisReadUserToken, tisValidateUserToken, tisReadFinger, tisValidateFinger,
               tisWriteUserToken, tisValidateEntry, tisUnlockDoor, tisCompleteFailedAccess});
  addProg("TISUserEntryOp", Path{}, tisUserEntryOp);

  ProgPtr tisOverrideDoorLockOp = uec(mk_guard(adminOpEnabled, overrideDoorLockOK));
  addProg("TISOverrideDoorLockOp", Path{}, tisOverrideDoorLockOp);
  ProgPtr tisShutdownOp = uec(mk_guard(adminOpEnabled, shutdownOK));
  addProg("TISShutdownOp", Path{}, tisShutdownOp);
  ProgPtr tisUpdateConfigDataOp = uec(mk_guard(adminOpEnabled, finishUpdateConfigOK));
  addProg("TISUpdateConfigDataOp", Path{}, tisUpdateConfigDataOp);

  ProgPtr tisAdminOp = choices({tisOverrideDoorLockOp, tisShutdownOp, tisUpdateConfigDataOp});
  addProg("TISAdminOp", Path{}, tisAdminOp);

  ProgPtr tisAdminLogout = uec(adminLogout);
  addProg("TISAdminLogout", Path{}, tisAdminLogout);
  ProgPtr tisIdle = uec(mk_skip());
  addProg("TISIdle", Path{}, tisIdle);

  ProgPtr tisOp = choices({tisUserEntryOp, tisAdminOp, tisAdminLogout, tisIdle});
  addProg("TISOp", Path{}, tisOp);

  ProgPtr tisUpdate = mk_seq(
      {mk_frame(root, Path::parse("rw"),
                mk_seq(mk_havoc(rw, Path::parse("mon.now"),
                                mk_leq(mk_var(rw, Path::parse("mon.now")),
                                       mk_bound("new", rw.leaf(*rw.find_leaf(Path::parse("mon.now"))).type))),
                       mk_havoc(rw, Path::parse("mon.floppy"), mk_true()))),
       mk_assign(root, Path::parse("rw.ctrl.latch"), mk_var(root, Path::parse("tis.currentLatch"))),
       mk_assign(root, Path::parse("rw.ctrl.display"),
                 mk_var(root, Path::parse("tis.currentDisplay")))});
  addProg("TISUpdate", Path{}, tisUpdate);

  ProgPtr tisOpThenUpdate = mk_seq(tisOp, tisUpdate);
  addProg("TISOpThenUpdate", Path{}, tisOpThenUpdate);

  auto lockedFirst = [&](ProgPtr group) {
    return mk_seq({mk_assign(root, Path::parse("tis.currentLatch"),
                             mk_lit(tt("currentLatch"), tt("currentLatch")->ctor_index("locked"))),
                   group, tisUpdate});
  };
  ProgPtr userUnlockFromLocked = lockedFirst(tisUserEntryOp);
  addProg("UserUnlockFromLocked", Path{}, userUnlockFromLocked);
  ProgPtr adminUnlockFromLocked = lockedFirst(tisAdminOp);
  addProg("AdminUnlockFromLocked", Path{}, adminUnlockFromLocked);

  // -- formalised requirements at the system level -----------------------------
  auto up = [&](ExprPtr e) { return coerce_up(e, tisPath, tisLo); };
  auto rootVeq = [&](const char* path, const char* ctor) {
    auto v = mk_var(root, Path::parse(path));
    return mk_eq(v, mk_lit(v->type, v->type->ctor_index(ctor)));
  };

  ExprPtr fsfr1 =
      mk_implies(ands({up(tisInv), rootVeq("tis.currentLatch", "locked"),
                       mk_wp_app("TISOpThenUpdate", rootVeq("rw.ctrl.latch", "unlocked"), false)}),
                 ors({mk_and(up(userTokenOK), up(fingerOKP)), up(userTokenAuth),
                      up(adminTokenGuardOK)}));
  addPred("FSFR1", Path{}, fsfr1);

  ExprPtr fsfr3 = mk_implies(ands({tisWf, veq("currentLatch", "locked"), veq("currentDoor", "open"),
                                   mk_leq(tv("alarmTimeout"), tv("currentTime"))}),
                             veq("doorAlarm", "alarming"));
  addPred("FSFR3", tisPath, fsfr3);

  // -- obligations -------------------------------------------------------------
  auto addOb = [&](Obligation ob) { m.obligations.push_back(std::move(ob)); };

  auto hoareOb = [&](const char* gid, const char* progName, ProgPtr prog) {
    Obligation ob;
    ob.gid = gid;
    ob.kind = Obligation::Kind::Hoare;
    ob.pre = up(tisInv);
    ob.post = up(tisInv);
    ob.progName = progName;
    ob.prog = std::move(prog);
    addOb(std::move(ob));
  };
  hoareOb("TISUserEntryOp_inv", "TISUserEntryOp", tisUserEntryOp);
  hoareOb("TISAdminOp_inv", "TISAdminOp", tisAdminOp);
  hoareOb("TISOp_inv", "TISOp", tisOp);

  {
    Obligation ob;
    ob.gid = "UnlockUserPrecond_thm";
    ob.kind = Obligation::Kind::Valid;
    ob.goal = mk_eq(mk_wp_app("UserUnlockFromLocked", rootVeq("rw.ctrl.latch", "unlocked"), false),
                    mk_and(rootVeq("tis.status", "waitingRemoveTokenSuccess"),
                           rootVeq("tis.userTokenPresence", "absent")));
    addOb(std::move(ob));
  }
  {
    Obligation ob;
    ob.gid = "UnlockAdminPrecond_thm";
    ob.kind = Obligation::Kind::Valid;
    auto cao = mk_var(root, Path::parse("tis.currentAdminOp"));
    auto rp = mk_var(root, Path::parse("tis.rolePresent"));
    ob.goal = mk_eq(
        mk_wp_app("AdminUnlockFromLocked", rootVeq("rw.ctrl.latch", "unlocked"), false),
        ands({rootVeq("tis.enclaveStatus", "waitingStartAdminOp"),
              rootVeq("tis.adminTokenPresence", "present"),
              mk_eq(cao, up(optLit("currentAdminOp", "overrideLock"))),
              mk_neq(rp, up(optLit("rolePresent", nullptr))),
              mk_neq(cao, up(optLit("currentAdminOp", nullptr)))}));
    addOb(std::move(ob));
  }
  {
    Obligation ob;
    ob.gid = "FSFR1_thm";
    ob.kind = Obligation::Kind::Valid;
    ob.goal = fsfr1;
    addOb(std::move(ob));
  }
  {
    Obligation ob;
    ob.gid = "FSFR3_thm";
    ob.kind = Obligation::Kind::Valid;
    ob.goal = up(fsfr3);
    addOb(std::move(ob));
  }
  {
    Obligation ob;
    ob.gid = "FSFR6_thm";
    ob.kind = Obligation::Kind::NMods;
    ob.prog = mk_guard(rootVeq("tis.adminTokenPresence", "absent"), tisOp);
    ob.vars = {Path::parse("tis.config"), Path::parse("rw.mon.floppy")};
    addOb(std::move(ob));
  }

  return m;
}

// The unlocking precondition of one operation group: wp of the promoted group
// followed by the controlled-variable update, with the digital latch pinned
// to locked.
enum class OpGroup { UserEntry, Admin };

inline ExprPtr unlocking_precondition(const GclModule& m, OpGroup g, WpCtx& ctx) {
  const auto* group = m.find_prog(g == OpGroup::UserEntry ? "TISUserEntryOp" : "TISAdminOp");
  const auto* update = m.find_prog("TISUpdate");
  if (!group || !update) throw Error("Internal", "unlocking_precondition: model incomplete");
  auto latchVar = mk_var(m.schema, Path::parse("rw.ctrl.latch"));
  auto post = mk_eq(latchVar, mk_lit(latchVar->type, latchVar->type->ctor_index("unlocked")));
  auto pre = wp(m.schema, mk_seq(group->prog, update->prog), post, ctx);
  auto cl = mk_var(m.schema, Path::parse("tis.currentLatch"));
  return subst_leaf(pre, cl->leaf, mk_lit(cl->type, cl->type->ctor_index("locked")));
}

}  // namespace argus

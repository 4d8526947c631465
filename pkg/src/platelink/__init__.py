"""Desk-scale simulator of a license-plate telemetry link over LoRa.

Subpackages and modules:

* ``platelink.vision``  - synthetic plate rendering and template OCR
* ``platelink.codec``   - the ``Plate:<...>, Link:<...>`` wire format
* ``platelink.modem``   - AT command grammar and modem register model
* ``platelink.phy``     - LoRa air time, link budget, channel calibration, energy
* ``platelink.nodes``   - transmitter / receiver state machines
* ``platelink.cloud``   - ThingSpeak-style update protocol and mock server
* ``platelink.sim``     - discrete-event harness, metrics, reports, calibration
"""

__version__ = "0.1.0"

"""Declarative records persisted in a KeyStore

MIT License

(C) Copyright [2026] tactile_grasp authors

Permission is hereby granted, free of charge, to any person obtaining a
copy of this software and associated documentation files (the "Software"),
to deal in the Software without restriction, including without limitation
the rights to use, copy, modify, merge, publish, distribute, sublicense,
and/or sell copies of the Software, and to permit persons to whom the
Software is furnished to do so, subject to the following conditions:

The above copyright notice and this permission notice shall be included
in all copies or substantial portions of the Software.

THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL
THE AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR
OTHER LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE,
ARISING FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR
OTHER DEALINGS IN THE SOFTWARE.
"""
import copy
import inspect
import json
import uuid

from .utils import canonical_json


class RecordAttr:
    """Declares one persisted attribute of a RecordModel subclass:

        class GraspLog(RecordModel):
            model_prefix = "/grasp_logs"
            log_id = RecordAttr(is_record_id=True)
            grasps = RecordAttr(default=[])

    Exactly one attribute per class carries the record id.  Its default,
    if given, must be callable; without one, ids are random UUIDs, so
    records that have to be reproducible pass their ids explicitly.
    Other attributes default to None unless 'default' says otherwise;
    a callable default is called, any other value is deep-copied for
    each new record.

    """
    @staticmethod
    def _default_record_id():
        return str(uuid.uuid4())

    def __init__(self, is_record_id=False, default=None):
        if is_record_id:
            if default is not None and not callable(default):
                raise ValueError("'default' for Record ID is not callable")
            if default is None:
                default = RecordAttr._default_record_id
        self.default = default
        self.is_record_id = is_record_id

    def get_default_value(self):
        """ A fresh default value for a new record.
        """
        if callable(self.default):
            return self.default()
        return copy.deepcopy(self.default)


class RecordModel:
    """Record Model

    This implements a parent class for persisted record classes which
    takes care of storing records in a KeyStore and retrieving them
    again, using a schema that encapsulates all of the declared
    attributes as a canonical JSON string under a key made of a prefix
    that groups records of the same class and the Record ID:

        <model prefix>/<record id>

    A derived record class must declare all of its attributes (see the
    RecordAttr class for details) and a 'model_prefix' class variable:

        class EpisodeRecord(RecordModel):
            model_prefix = "/episodes"
            episode_id = RecordAttr(is_record_id=True)
            ...

    Any parameter passed into the initializer whose name is not in the
    list of declared attributes is silently ignored.  Attributes set on
    an instance but not declared are treated as ephemeral and are never
    persisted.

    """
    @classmethod
    def _get_record_attrs(cls):
        """Build a dictionary of record attributes and their respective
        specifications.

        """
        ret = {}
        for name, member in inspect.getmembers(cls):
            if isinstance(member, RecordAttr):
                ret[name] = member
        return ret

    @classmethod
    def _get_record_id_info(cls):
        """Find the name of the field specified to contain the Record ID
        in instances of the derived record class.

        Exceptions:

            If more than one attribute is tagged as the Record ID an
            AssertionError is raised; if none is, an AttributeError is
            raised.

        """
        ret = None
        for attr, spec in cls._get_record_attrs().items():
            if spec.is_record_id:
                if ret is not None:
                    reason = "can't have two Record IDs in '%s'" % cls.__name__
                    raise AssertionError(reason)
                ret = (attr, spec)
        if ret is None:
            reason = "must have a Record ID in '%s'" % cls.__name__
            raise AttributeError(reason)
        return ret

    @classmethod
    def key_for(cls, record_id):
        """ Store key of the record with id 'record_id'.
        """
        # pylint: disable=no-member
        return "%s/%s" % (cls.model_prefix, record_id)

    @classmethod
    def from_json(cls, json_string):
        """ Construct a record from its stored JSON form.
        """
        return cls(json.loads(json_string))

    @classmethod
    def get(cls, store, record_id):
        """Find the record of this class with the specified Record ID in
        'store'.

        Return:

             A python object of type 'cls' if the record exists, None
             otherwise.

        """
        json_string = store.get(cls.key_for(record_id))
        if json_string is None:
            return None
        return cls.from_json(json_string)

    @classmethod
    def get_all(cls, store):
        """Find all records of this class in 'store', in the order they
        were first stored.

        """
        prefix = cls.model_prefix + '/'  # pylint: disable=no-member
        return [cls.from_json(value) for _, value in store.get_prefix(prefix)]

    def __init__(self, *args, **kwargs):
        """Initializer -- construct a record from keyword arguments or a
        dictionary of key value pairs.
        """
        if 'model_prefix' not in type(self).__dict__:
            reason = "'%s' missing required attribute 'model_prefix'" % (
                type(self).__name__
            )
            raise AttributeError(reason)
        # Raises if the Record ID declaration is missing or duplicated.
        self._get_record_id_info()
        attr_specs = self._get_record_attrs()
        for arg_dict in args:
            for attr, value in arg_dict.items():
                if attr in attr_specs:
                    setattr(self, attr, value)
        for attr, value in kwargs.items():
            if attr in attr_specs:
                setattr(self, attr, value)
        # Fill in anything not given, including the Record ID.
        for attr, spec in attr_specs.items():
            if attr not in self.__dict__:
                setattr(self, attr, spec.get_default_value())

    def get_id(self):
        """ Get the record id (key) of a record
        """
        rid_name, _ = self._get_record_id_info()
        return self.__dict__[rid_name]

    def to_dict(self):
        """ The declared attributes of the record as a dictionary.
        """
        attr_specs = self._get_record_attrs()
        return {attr: value for attr, value in self.__dict__.items()
                if attr in attr_specs}

    def to_json(self):
        """ Canonical JSON form of the declared attributes.
        """
        return canonical_json(self.to_dict())

    def put(self, store):
        """ Store the record in 'store' in its current state.
        """
        store.put(self.key_for(self.get_id()), self.to_json())

    def remove(self, store):
        """ Remove the record from 'store'.
        """
        return store.delete(self.key_for(self.get_id()))
